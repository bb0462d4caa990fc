//! Reference coders (Huffman, Shannon-Fano-Elias) and exhaustive audits over
//! all 2^n sequences for small n.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::analysis::{binomial_pmf, compensated_sum, rank_widths, sequence_entropy};
use crate::bitio::{BitReader, BitSequence};
use crate::codec::{decode_sequence, encode_sequence, BernoulliModel};
use crate::error::{Error, Result};

pub const EXHAUSTIVE_LIMIT: u64 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct CodeTable {
    pub symbols: Vec<usize>,
    pub codewords: Vec<BitSequence>,
    pub probabilities: Vec<f64>,
}

impl CodeTable {
    pub fn mean_length(&self) -> f64 {
        compensated_sum(self.codewords.iter().zip(&self.probabilities).map(|(c, &p)| p * c.len() as f64))
    }

    pub fn kraft_sum(&self) -> f64 {
        kraft_sum(self.codewords.iter().map(|c| c.len() as u64))
    }

    pub fn is_prefix_free(&self) -> bool {
        is_prefix_free(&self.codewords)
    }

    pub fn max_length(&self) -> usize {
        self.codewords.iter().map(BitSequence::len).max().unwrap_or(0)
    }

    /// Codeword of a symbol id, if it has one.
    pub fn codeword(&self, symbol: usize) -> Option<&BitSequence> {
        self.symbols.iter().position(|&s| s == symbol).map(|i| &self.codewords[i])
    }
}

pub fn kraft_sum<I: IntoIterator<Item = u64>>(lengths: I) -> f64 {
    compensated_sum(lengths.into_iter().map(|l| (-(l as f64)).exp2()))
}

/// True when no codeword is a prefix of another (duplicates included).
pub fn is_prefix_free(codewords: &[BitSequence]) -> bool {
    let mut sorted: Vec<&BitSequence> = codewords.iter().collect();
    sorted.sort_by(|a, b| a.as_bitslice().cmp(b.as_bitslice()));
    sorted.windows(2).all(|w| {
        let (a, b) = (w[0].as_bitslice(), w[1].as_bitslice());
        !(b.len() >= a.len() && &b[..a.len()] == a)
    })
}

fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidModel("probabilities must be finite and non-negative".into()));
    }
    if probs.iter().filter(|&&p| p > 0.0).count() < 2 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(())
}

#[derive(PartialEq)]
struct Node {
    weight: f64,
    order: usize,
}

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.total_cmp(&other.weight).then(self.order.cmp(&other.order))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Huffman code over symbols 0..len. Ties go to the lower symbol id; a
/// merged node sorts after every existing node of equal weight. The first
/// node taken from the queue gets the 0 branch.
pub fn huffman_build(probs: &[f64]) -> Result<CodeTable> {
    check_distribution(probs)?;
    let n = probs.len();
    // children[i] for internal node i - n
    let mut children: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    let mut heap: BinaryHeap<Reverse<Node>> =
        probs.iter().enumerate().map(|(i, &w)| Reverse(Node { weight: w, order: i })).collect();
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().unwrap();
        let Reverse(b) = heap.pop().unwrap();
        children.push((a.order, b.order));
        heap.push(Reverse(Node { weight: a.weight + b.weight, order: n + children.len() - 1 }));
    }
    let root = heap.pop().unwrap().0.order;
    let mut codewords = vec![BitSequence::new(); n];
    let mut stack = vec![(root, BitSequence::new())];
    while let Some((node, prefix)) = stack.pop() {
        if node < n {
            codewords[node] = prefix;
        } else {
            let (zero, one) = children[node - n];
            let mut c1 = prefix.clone();
            c1.push(true);
            stack.push((one, c1));
            let mut c0 = prefix;
            c0.push(false);
            stack.push((zero, c0));
        }
    }
    Ok(CodeTable { symbols: (0..n).collect(), codewords, probabilities: probs.to_vec() })
}

/// Exact value of a finite non-negative binary64 as m·2^-FRAC.
const FRAC: u64 = 1200;

fn fixed_point(x: f64) -> BigUint {
    if x == 0.0 {
        return BigUint::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let (mant, e) = if exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
    };
    let shift = FRAC as i64 + e;
    assert!(shift >= 0, "value below fixed-point resolution");
    BigUint::from(mant) << shift as u64
}

/// Shannon-Fano-Elias code in the given symbol order. Symbol s gets the
/// first ⌈log2(1/p_s)⌉ + 1 bits of F(s-1) + p_s/2, computed exactly.
/// Zero-probability symbols get no codeword.
pub fn sfe_build(probs: &[f64]) -> Result<CodeTable> {
    check_distribution(probs)?;
    let mut table = CodeTable { symbols: vec![], codewords: vec![], probabilities: vec![] };
    let mut cum = BigUint::zero();
    for (s, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let fp = fixed_point(p);
        // ⌈log2(1/p)⌉ = FRAC - ⌊log2 fp⌋
        let len = FRAC - (fp.bits() - 1) + 1;
        let mid: BigUint = (&cum << 1u32) + &fp;
        // mid is F̄ scaled by 2^(FRAC+1); keep the top `len` fractional bits.
        let word = &mid >> (FRAC + 1 - len);
        let mut cw = BitSequence::with_capacity(len as usize);
        for i in (0..len).rev() {
            cw.push(word.bit(i));
        }
        table.symbols.push(s);
        table.codewords.push(cw);
        table.probabilities.push(p);
        cum += fp;
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coder {
    /// The count-plus-rank code of this crate.
    Bzc,
    HuffmanFull,
    SfeFull,
}

impl fmt::Display for Coder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coder::Bzc => "bzc",
            Coder::HuffmanFull => "huffman-full",
            Coder::SfeFull => "sfe-full",
        })
    }
}

impl FromStr for Coder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bzc" => Ok(Coder::Bzc),
            "huffman-full" => Ok(Coder::HuffmanFull),
            "sfe-full" => Ok(Coder::SfeFull),
            _ => Err(Error::Parse(format!("unknown coder {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub n: u64,
    pub p: f64,
    pub coder: Coder,
    pub mean_length: f64,
    pub entropy: f64,
    pub kraft_sum: f64,
    pub prefix_free: bool,
    pub max_length: usize,
    /// Set for the bzc coder: every sequence decoded back to itself.
    pub roundtrip: Option<bool>,
}

/// The sequence whose bits, first to last, are the binary digits of `index`.
pub fn sequence_of(index: u64, n: u64) -> BitSequence {
    BitSequence::from_uint(index, n as usize)
}

/// Probabilities of all 2^n sequences, indexed as in [`sequence_of`].
pub fn sequence_probabilities(n: u64, p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    (0..1u64 << n)
        .map(|i| {
            let k = i.count_ones() as i32;
            p.powi(k) * q.powi(n as i32 - k)
        })
        .collect()
}

pub fn exhaustive_code_audit(n: u64, p: f64, coder: Coder) -> Result<AuditReport> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { n, limit: EXHAUSTIVE_LIMIT });
    }
    let model = BernoulliModel::new(n, p)?;
    let probs = sequence_probabilities(n, p);
    let entropy = sequence_entropy(n, p)?;
    let (table, roundtrip) = match coder {
        Coder::Bzc => {
            let mut ok = true;
            let mut codewords = Vec::with_capacity(probs.len());
            for i in 0..1u64 << n {
                let x = sequence_of(i, n);
                let c = encode_sequence(&x, &model)?;
                let mut r = BitReader::from_bits(&c);
                ok &= decode_sequence(&mut r, &model).as_ref() == Ok(&x) && r.remaining() == 0;
                codewords.push(c);
            }
            let table = CodeTable { symbols: (0..probs.len()).collect(), codewords, probabilities: probs };
            (table, Some(ok))
        }
        Coder::HuffmanFull => (huffman_build(&probs)?, None),
        Coder::SfeFull => (sfe_build(&probs)?, None),
    };
    Ok(AuditReport {
        n,
        p,
        coder,
        mean_length: table.mean_length(),
        entropy,
        kraft_sum: table.kraft_sum(),
        prefix_free: table.is_prefix_free(),
        max_length: table.max_length(),
        roundtrip,
    })
}

/// E[Huffman(S) length + ⌈log2 C(n,S)⌉], the count code replaced by a
/// Huffman code over the weight distribution.
pub fn huffman_count_variant_mean(n: u64, p: f64) -> Result<f64> {
    let pmf = binomial_pmf(n, p)?;
    let widths = rank_widths(n);
    let table = huffman_build(&pmf)?;
    Ok(compensated_sum(
        (0..=n as usize).map(|k| pmf[k] * (table.codewords[k].len() as u64 + widths[k]) as f64),
    ))
}
