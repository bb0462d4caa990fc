//! Bit sequences, MSB-first bit streams and the `BZC1` container header.
//!
//! Bits are packed most-significant-bit first; the final byte of a stream is
//! zero-padded. The header is 34 bytes, all integers little-endian:
//!
//! | bytes  | field               |
//! |--------|---------------------|
//! | 0..4   | magic `BZC1`        |
//! | 4      | version (1)         |
//! | 5      | mode                |
//! | 6..14  | n_or_v (u64)        |
//! | 14..22 | p as binary64 bits  |
//! | 22..26 | block_len (u32)     |
//! | 26..34 | payload_bit_count   |

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use num_bigint::BigUint;

use crate::error::{Error, Result};

/// An ordered, finite sequence of bits. Index 0 is the first (leftmost) bit.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSequence {
    bits: BitVec<u8, Msb0>,
}

impl BitSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self { bits: BitVec::with_capacity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: BitVec::repeat(false, n) }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(it: I) -> Self {
        Self { bits: it.into_iter().collect() }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let mut s = Self::with_capacity(width);
        s.push_uint(value, width);
        s
    }

    /// Wraps `bit_len` bits taken from the front of `bytes`.
    pub fn from_bytes(bytes: &[u8], bit_len: usize) -> Result<Self> {
        let avail = bytes.len() * 8;
        if bit_len > avail {
            return Err(Error::PayloadExhausted {
                needed: bit_len as u64,
                available: avail as u64,
            });
        }
        Ok(Self { bits: BitVec::from_bitslice(&bytes.view_bits::<Msb0>()[..bit_len]) })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).map(|b| *b)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits.set(i, value);
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width >= 64 || value >> width == 0);
        for i in (0..width).rev() {
            self.bits.push(i < 64 && (value >> i) & 1 == 1);
        }
    }

    pub fn extend_from(&mut self, other: &BitSequence) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.bits.iter().by_vals()
    }

    pub fn slice(&self, start: usize, end: usize) -> BitSequence {
        Self { bits: BitVec::from_bitslice(&self.bits[start..end]) }
    }

    pub fn as_bitslice(&self) -> &BitSlice<u8, Msb0> {
        &self.bits
    }

    /// Packed bytes, final byte zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = self.bits.clone();
        v.set_uninitialized(false);
        v.into_vec()
    }
}

impl fmt::Display for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSequence({self})")
    }
}

impl FromStr for BitSequence {
    type Err = Error;

    /// Parses ASCII `0`/`1`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitSequence::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected {c:?} at offset {i}"))),
            }
        }
        Ok(out)
    }
}

impl FromIterator<bool> for BitSequence {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bools(iter)
    }
}

/// Append-only bit sink.
#[derive(Debug, Clone, Default)]
pub struct BitWriter {
    out: BitSequence,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.out.push(bit);
    }

    pub fn write_bits(&mut self, bits: &BitSequence) {
        self.out.extend_from(bits);
    }

    pub fn write_uint(&mut self, value: u64, width: usize) {
        self.out.push_uint(value, width);
    }

    /// Writes `value` in exactly `width` bits. `value` must fit.
    pub fn write_biguint(&mut self, value: &BigUint, width: usize) {
        assert!(value.bits() <= width as u64, "value wider than field");
        if width == 0 {
            return;
        }
        let bytes = value.to_bytes_be();
        let bits = bytes.view_bits::<Msb0>();
        let have = bits.len();
        if have >= width {
            self.out.bits.extend_from_bitslice(&bits[have - width..]);
        } else {
            self.out.bits.resize(self.out.len() + width - have, false);
            self.out.bits.extend_from_bitslice(bits);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.out.len()
    }

    pub fn into_bits(self) -> BitSequence {
        self.out
    }

    /// Closes the stream: packed bytes and the exact bit count.
    pub fn finish(self) -> (Vec<u8>, u64) {
        let n = self.out.len() as u64;
        (self.out.to_bytes(), n)
    }
}

/// Cursor over a bounded bit payload.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a BitSlice<u8, Msb0>,
    pos: usize,
}

impl<'a> BitReader<'a> {
    /// Reader over the first `bit_count` bits of `bytes`.
    pub fn new(bytes: &'a [u8], bit_count: u64) -> Result<Self> {
        let avail = bytes.len() as u64 * 8;
        if bit_count > avail {
            return Err(Error::PayloadExhausted { needed: bit_count, available: avail });
        }
        Ok(Self { bits: &bytes.view_bits::<Msb0>()[..bit_count as usize], pos: 0 })
    }

    pub fn from_bits(bits: &'a BitSequence) -> Self {
        Self { bits: bits.as_bitslice(), pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    fn take(&mut self, count: usize) -> Result<&'a BitSlice<u8, Msb0>> {
        if count > self.remaining() {
            return Err(Error::PayloadExhausted {
                needed: count as u64,
                available: self.remaining() as u64,
            });
        }
        let s = &self.bits[self.pos..self.pos + count];
        self.pos += count;
        Ok(s)
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        Ok(self.take(1)?[0])
    }

    pub fn read_bits(&mut self, count: usize) -> Result<BitSequence> {
        Ok(BitSequence { bits: BitVec::from_bitslice(self.take(count)?) })
    }

    /// Reads an unsigned integer of `width` ≤ 64 bits, MSB first.
    pub fn read_uint(&mut self, width: usize) -> Result<u64> {
        assert!(width <= 64);
        Ok(self.take(width)?.iter().by_vals().fold(0u64, |acc, b| (acc << 1) | b as u64))
    }

    pub fn read_biguint(&mut self, width: usize) -> Result<BigUint> {
        let s = self.take(width)?;
        let pad = (8 - width % 8) % 8;
        let mut v: BitVec<u8, Msb0> = BitVec::with_capacity(width + pad);
        v.resize(pad, false);
        v.extend_from_bitslice(s);
        Ok(BigUint::from_bytes_be(v.as_raw_slice()))
    }
}

pub const MAGIC: [u8; 4] = *b"BZC1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Mode {
    SequenceDirect = 0,
    SequenceBlock = 1,
    GraphDirect = 2,
    GraphBlock = 3,
}

impl Mode {
    pub fn from_byte(b: u8) -> Result<Mode> {
        match b {
            0 => Ok(Mode::SequenceDirect),
            1 => Ok(Mode::SequenceBlock),
            2 => Ok(Mode::GraphDirect),
            3 => Ok(Mode::GraphBlock),
            b => Err(Error::BadMode(b)),
        }
    }

    pub fn is_block(self) -> bool {
        matches!(self, Mode::SequenceBlock | Mode::GraphBlock)
    }

    pub fn is_graph(self) -> bool {
        matches!(self, Mode::GraphDirect | Mode::GraphBlock)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainerHeader {
    pub mode: Mode,
    pub n_or_v: u64,
    pub p: f64,
    pub block_len: u32,
    pub payload_bit_count: u64,
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::BadProbability(p))
    }
}

impl ContainerHeader {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.mode.is_block() != (self.block_len > 0) {
            return Err(Error::BadHeader(format!(
                "block_len {} inconsistent with mode {:?}",
                self.block_len, self.mode
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<[u8; HEADER_LEN]> {
        self.validate()?;
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4] = VERSION;
        b[5] = self.mode as u8;
        b[6..14].copy_from_slice(&self.n_or_v.to_le_bytes());
        b[14..22].copy_from_slice(&self.p.to_bits().to_le_bytes());
        b[22..26].copy_from_slice(&self.block_len.to_le_bytes());
        b[26..34].copy_from_slice(&self.payload_bit_count.to_le_bytes());
        Ok(b)
    }

    /// Parses the header at the front of `bytes`.
    pub fn from_bytes(bytes: &[u8]) -> Result<ContainerHeader> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::PayloadExhausted {
                needed: HEADER_LEN as u64 * 8,
                available: bytes.len() as u64 * 8,
            });
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(Error::BadMagic(magic));
        }
        if bytes[4] != VERSION {
            return Err(Error::BadVersion(bytes[4]));
        }
        let mode = Mode::from_byte(bytes[5])?;
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let h = ContainerHeader {
            mode,
            n_or_v: u64_at(6),
            p: f64::from_bits(u64_at(14)),
            block_len: u32::from_le_bytes(bytes[22..26].try_into().unwrap()),
            payload_bit_count: u64_at(26),
        };
        h.validate()?;
        Ok(h)
    }
}
