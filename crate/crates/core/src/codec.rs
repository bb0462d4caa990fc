//! Sequence encoder/decoder: count code, then the rank in exactly
//! ⌈log2 C(n,k)⌉ bits. Block mode codes fixed-length chunks independently;
//! a short final chunk of length m uses its own (m, p) parameters.

use rayon::prelude::*;

use crate::bitio::{check_probability, BitReader, BitSequence, BitWriter, ContainerHeader, Mode, HEADER_LEN};
use crate::combinatorics::{binomial_nat, log2_binomial, rank_scan, unrank_scan, width_of};
use crate::countcode::{derive_params, CountCodeParams};
use crate::error::{Error, Result};
use crate::nat::Nat;

/// Longest sequence a container may declare.
pub const MAX_SEQUENCE_BITS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliModel {
    pub n: u64,
    pub p: f64,
}

impl BernoulliModel {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("n must be at least 1".into()));
        }
        check_probability(p).map_err(|_| Error::InvalidModel(format!("p={p} outside (0,1)")))?;
        Ok(BernoulliModel { n, p })
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn params(&self) -> CountCodeParams {
        derive_params(self.n, self.p).expect("validated model")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedBlock {
    pub k: u64,
    pub count_bits: BitSequence,
    pub rank_bits: BitSequence,
}

impl EncodedBlock {
    pub fn len(&self) -> usize {
        self.count_bits.len() + self.rank_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_bits(&self) -> BitSequence {
        let mut out = self.count_bits.clone();
        out.extend_from(&self.rank_bits);
        out
    }
}

fn check_len(x: &BitSequence, model: &BernoulliModel) -> Result<()> {
    if x.len() as u64 != model.n {
        return Err(Error::LengthMismatch { expected: model.n, actual: x.len() as u64 });
    }
    Ok(())
}

fn write_rank(w: &mut BitWriter, rank: &Nat, total: &Nat) {
    w.write_biguint(&rank.to_biguint(), width_of(total) as usize);
}

pub fn encode_block(x: &BitSequence, model: &BernoulliModel) -> Result<EncodedBlock> {
    check_len(x, model)?;
    let k = x.count_ones() as u64;
    let mut cw = BitWriter::new();
    model.params().write(&mut cw, k)?;
    let (rank, total) = rank_scan(x);
    let mut rw = BitWriter::new();
    write_rank(&mut rw, &rank, &total);
    Ok(EncodedBlock { k, count_bits: cw.into_bits(), rank_bits: rw.into_bits() })
}

pub fn encode_sequence_into(w: &mut BitWriter, x: &BitSequence, model: &BernoulliModel) -> Result<()> {
    check_len(x, model)?;
    model.params().write(w, x.count_ones() as u64)?;
    let (rank, total) = rank_scan(x);
    write_rank(w, &rank, &total);
    Ok(())
}

pub fn encode_sequence(x: &BitSequence, model: &BernoulliModel) -> Result<BitSequence> {
    let mut w = BitWriter::new();
    encode_sequence_into(&mut w, x, model)?;
    Ok(w.into_bits())
}

pub fn decode_sequence(r: &mut BitReader<'_>, model: &BernoulliModel) -> Result<BitSequence> {
    let n = model.n;
    let k = model.params().read(r)?;
    let estimate = log2_binomial(n, k);
    if estimate > r.remaining() as f64 + 1.0 {
        return Err(Error::PayloadExhausted { needed: estimate.floor() as u64, available: r.remaining() as u64 });
    }
    let total = binomial_nat(n, k);
    let rank = Nat::from_biguint(&r.read_biguint(width_of(&total) as usize)?);
    if rank >= total {
        return Err(Error::RankOutOfRange { n, k });
    }
    Ok(unrank_scan(rank, n, k, total))
}

fn check_block_len(block_len: u64) -> Result<()> {
    if block_len == 0 {
        return Err(Error::InvalidModel("block_len must be at least 1".into()));
    }
    Ok(())
}

/// Lengths of the chunks `total_len` splits into.
pub fn block_lengths(total_len: u64, block_len: u64) -> impl Iterator<Item = u64> {
    let count = total_len.div_ceil(block_len.max(1));
    (0..count).map(move |i| block_len.min(total_len - i * block_len))
}

pub fn encode_blocks(x: &BitSequence, p: f64, block_len: u64) -> Result<BitSequence> {
    check_block_len(block_len)?;
    if x.is_empty() {
        return Err(Error::InvalidModel("empty input".into()));
    }
    let n = x.len() as u64;
    let chunks: Vec<(u64, u64)> = block_lengths(n, block_len)
        .enumerate()
        .map(|(i, m)| (i as u64 * block_len, m))
        .collect();
    let parts = chunks
        .par_iter()
        .map(|&(start, m)| {
            let model = BernoulliModel::new(m, p)?;
            encode_sequence(&x.slice(start as usize, (start + m) as usize), &model)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = BitSequence::with_capacity(parts.iter().map(|b| b.len()).sum());
    for part in &parts {
        out.extend_from(part);
    }
    Ok(out)
}

pub fn decode_blocks(r: &mut BitReader<'_>, total_len: u64, p: f64, block_len: u64) -> Result<BitSequence> {
    check_block_len(block_len)?;
    // Every block costs at least two count-code bits.
    let blocks = total_len.div_ceil(block_len);
    if blocks.saturating_mul(2) > r.remaining() as u64 {
        return Err(Error::PayloadExhausted { needed: blocks.saturating_mul(2), available: r.remaining() as u64 });
    }
    let mut out = BitSequence::with_capacity(total_len.min(1 << 24) as usize);
    for m in block_lengths(total_len, block_len) {
        out.extend_from(&decode_sequence(r, &BernoulliModel::new(m, p)?)?);
    }
    Ok(out)
}

/// Header plus packed payload.
pub(crate) fn build_container(mode: Mode, n_or_v: u64, p: f64, block_len: u32, payload: BitSequence) -> Result<Vec<u8>> {
    let header = ContainerHeader { mode, n_or_v, p, block_len, payload_bit_count: payload.len() as u64 };
    let mut out = header.to_bytes()?.to_vec();
    out.extend_from_slice(&payload.to_bytes());
    Ok(out)
}

pub(crate) fn encode_payload(bits: &BitSequence, p: f64, block_len: u32) -> Result<BitSequence> {
    if block_len == 0 {
        encode_sequence(bits, &BernoulliModel::new(bits.len() as u64, p)?)
    } else {
        encode_blocks(bits, p, block_len as u64)
    }
}

/// Compresses a raw bit sequence. `block_len = 0` selects direct mode.
pub fn compress_file(input: &BitSequence, p: f64, block_len: u32) -> Result<Vec<u8>> {
    check_probability(p)?;
    let mode = if block_len == 0 { Mode::SequenceDirect } else { Mode::SequenceBlock };
    let payload = encode_payload(input, p, block_len)?;
    build_container(mode, input.len() as u64, p, block_len, payload)
}

/// Parses and decodes a container of any mode. For graph modes the bits are
/// the edge-indicator sequence of length C(v,2).
pub fn decompress_container(bytes: &[u8]) -> Result<(ContainerHeader, BitSequence)> {
    let header = ContainerHeader::from_bytes(bytes)?;
    let payload = &bytes[HEADER_LEN..];
    let have = payload.len() as u64 * 8;
    if header.payload_bit_count > have {
        return Err(Error::PayloadExhausted { needed: header.payload_bit_count, available: have });
    }
    if have >= header.payload_bit_count + 8 {
        return Err(Error::BadHeader(format!(
            "{} payload bytes for {} payload bits",
            payload.len(),
            header.payload_bit_count
        )));
    }
    let n = if header.mode.is_graph() {
        crate::graph::pair_count(header.n_or_v)?
    } else {
        header.n_or_v
    };
    if n > MAX_SEQUENCE_BITS {
        return Err(Error::TooLarge { n, limit: MAX_SEQUENCE_BITS });
    }
    let mut r = BitReader::new(payload, header.payload_bit_count)?;
    let bits = if header.mode.is_block() {
        decode_blocks(&mut r, n, header.p, header.block_len as u64)?
    } else {
        decode_sequence(&mut r, &BernoulliModel::new(n, header.p)?)?
    };
    if r.remaining() != 0 {
        return Err(Error::BadHeader(format!("{} unused payload bits", r.remaining())));
    }
    Ok((header, bits))
}

pub fn decompress_file(bytes: &[u8]) -> Result<BitSequence> {
    decompress_container(bytes).map(|(_, bits)| bits)
}

/// Length of the codeword for a weight-k block of length n.
pub fn codeword_length(model: &BernoulliModel, k: u64) -> Result<u64> {
    let params = model.params();
    Ok(params.code_length(k)? + width_of(&binomial_nat(model.n, k.min(model.n))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitSequence {
        s.parse().unwrap()
    }

    #[test]
    fn encode_examples() {
        let m = BernoulliModel::new(4, 0.2).unwrap();
        assert_eq!(encode_sequence(&bits("1101"), &m).unwrap(), bits("1100010"));
        assert_eq!(encode_sequence(&bits("0000"), &m).unwrap(), bits("000"));
        let b = encode_block(&bits("1101"), &m).unwrap();
        assert_eq!((b.count_bits, b.rank_bits), (bits("11000"), bits("10")));
        assert_eq!(
            encode_sequence(&bits("110"), &m),
            Err(Error::LengthMismatch { expected: 4, actual: 3 })
        );
    }

    #[test]
    fn decode_examples() {
        let m = BernoulliModel::new(4, 0.2).unwrap();
        let s = bits("1100010");
        assert_eq!(decode_sequence(&mut BitReader::from_bits(&s), &m).unwrap(), bits("1101"));
        let s = bits("000");
        assert_eq!(decode_sequence(&mut BitReader::from_bits(&s), &m).unwrap(), bits("0000"));
        let s = bits("11");
        assert!(matches!(
            decode_sequence(&mut BitReader::from_bits(&s), &m),
            Err(Error::PayloadExhausted { .. })
        ));
        // k = 3 has C(4,3) = 4 values; rank 3 is the last valid one.
        let s = bits("1100011");
        assert_eq!(decode_sequence(&mut BitReader::from_bits(&s), &m).unwrap(), bits("1110"));
    }

    #[test]
    fn rank_out_of_range() {
        // k = 2 of n = 3: C(3,2) = 3 needs 2 bits, so rank 3 is corrupt.
        let m = BernoulliModel::new(3, 0.5).unwrap();
        let mut w = BitWriter::new();
        m.params().write(&mut w, 2).unwrap();
        w.write_uint(3, 2);
        let s = w.into_bits();
        assert_eq!(decode_sequence(&mut BitReader::from_bits(&s), &m), Err(Error::RankOutOfRange { n: 3, k: 2 }));
    }

    #[test]
    fn blocks_use_own_params() {
        let x = bits("1011001");
        let out = encode_blocks(&x, 0.3, 5).unwrap();
        let first = encode_sequence(&x.slice(0, 5), &BernoulliModel::new(5, 0.3).unwrap()).unwrap();
        let second = encode_sequence(&x.slice(5, 7), &BernoulliModel::new(2, 0.3).unwrap()).unwrap();
        let mut both = first.clone();
        both.extend_from(&second);
        assert_eq!(out, both);
        let lens: Vec<u64> = block_lengths(7, 5).collect();
        assert_eq!(lens, vec![5, 2]);
        assert_eq!(decode_blocks(&mut BitReader::from_bits(&out), 7, 0.3, 5).unwrap(), x);
        let whole = encode_blocks(&x, 0.3, 100).unwrap();
        assert_eq!(whole, encode_sequence(&x, &BernoulliModel::new(7, 0.3).unwrap()).unwrap());
    }

    #[test]
    fn container_roundtrip_and_errors() {
        let x = bits("0010000001000000000000010000001000000000001000000100");
        for block_len in [0u32, 7] {
            let bytes = compress_file(&x, 0.1, block_len).unwrap();
            assert_eq!(bytes[5], if block_len == 0 { 0 } else { 1 });
            assert_eq!(decompress_file(&bytes).unwrap(), x);
        }
        let bytes = compress_file(&x, 0.1, 0).unwrap();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decompress_file(&bad), Err(Error::BadMagic(_))));
        let mut short = bytes.clone();
        short.truncate(short.len() - 1);
        assert!(matches!(decompress_file(&short), Err(Error::PayloadExhausted { .. })));
        let mut lying = bytes.clone();
        let count = u64::from_le_bytes(lying[26..34].try_into().unwrap());
        lying[26..34].copy_from_slice(&(count - 1).to_le_bytes());
        assert!(decompress_file(&lying).is_err());
        assert!(matches!(compress_file(&x, 1.0, 0), Err(Error::BadProbability(_))));
    }

    #[test]
    fn length_law() {
        let m = BernoulliModel::new(12, 0.3).unwrap();
        for s in ["000000000000", "111111111111", "101010101010", "000100000001"] {
            let x = bits(s);
            let k = x.count_ones() as u64;
            assert_eq!(encode_sequence(&x, &m).unwrap().len() as u64, codeword_length(&m, k).unwrap());
        }
    }
}
