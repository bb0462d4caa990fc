//! Binomial coefficients and the lexicographic rank of fixed-weight words.
//!
//! A sequence `x` of length n is read as an n-bit number whose first element
//! is the most significant bit (position n-1). With the 1-bits at positions
//! l_1 < ... < l_k counted from the right, the rank is
//! `sum_i C(l_i, i)`, the number of weight-k words numerically below `x`.
//!
//! Both directions walk the positions once and keep the running binomial
//! up to date with one multiply and one exact divide per step.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bitio::BitSequence;
use crate::error::{Error, Result};
use crate::nat::{Nat, Scaled};

/// C(n, k), or 0 when k < 0 or k > n.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    binomial_nat(n, k as u64).to_biguint()
}

pub(crate) fn binomial_nat(n: u64, k: u64) -> Nat {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    if k < 128 || n > 1 << 26 {
        let mut c = Scaled::new(Nat::one());
        for i in 1..=k {
            c.scale(n - k + i, i);
        }
        c.into_exact()
    } else {
        Nat::from_biguint(&binomial_by_primes(n, k))
    }
}

/// Product of prime powers p^e, e = number of carries when adding k and n-k
/// in base p.
fn binomial_by_primes(n: u64, k: u64) -> BigUint {
    let n_us = n as usize;
    let mut composite = vec![false; n_us + 1];
    let mut words: Vec<u64> = Vec::new();
    let mut acc = 1u64;
    for p in 2..=n_us {
        if composite[p] {
            continue;
        }
        let mut j = p * p;
        while j <= n_us {
            composite[j] = true;
            j += p;
        }
        let p = p as u64;
        let mut e = 0u32;
        let mut pk = p;
        loop {
            e += (n / pk - k / pk - (n - k) / pk) as u32;
            match pk.checked_mul(p) {
                Some(next) if next <= n => pk = next,
                _ => break,
            }
        }
        for _ in 0..e {
            match acc.checked_mul(p) {
                Some(v) => acc = v,
                None => {
                    words.push(acc);
                    acc = p;
                }
            }
        }
    }
    words.push(acc);
    product_tree(&words)
}

fn product_tree(words: &[u64]) -> BigUint {
    match words.len() {
        0 => BigUint::one(),
        1 => BigUint::from(words[0]),
        n if n <= 16 => words.iter().fold(BigUint::one(), |a, &w| a * w),
        n => product_tree(&words[..n / 2]) * product_tree(&words[n / 2..]),
    }
}

fn ln_factorial(m: u64) -> f64 {
    if m < 16 {
        return (2..=m).map(|i| (i as f64).ln()).sum();
    }
    let x = m as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x)
}

/// log2 C(n,k) in floating point, accurate to well under a bit.
pub(crate) fn log2_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)) / std::f64::consts::LN_2
}

/// ⌈log2 C(n,k)⌉: the bit length of C(n,k) - 1, or 0 when C(n,k) = 1.
pub fn rank_bit_width(n: u64, k: u64) -> u64 {
    assert!(k <= n, "k > n");
    width_of(&binomial_nat(n, k))
}

pub(crate) fn width_of(total: &Nat) -> u64 {
    let bits = total.bits();
    // C - 1 has the same bit length as C unless C is a power of two.
    let limbs = total.limbs();
    let pow2 = bits > 0 && {
        let top = bits - 1;
        limbs[(top / 64) as usize] == 1 << (top % 64) && limbs[..(top / 64) as usize].iter().all(|&l| l == 0)
    };
    if pow2 {
        bits - 1
    } else {
        bits
    }
}

/// Positions of the 1-bits counted from the right, increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnePositions(pub Vec<u64>);

impl OnePositions {
    pub fn of(x: &BitSequence) -> Self {
        let n = x.len() as u64;
        OnePositions(x.iter().enumerate().rev().filter(|&(_, b)| b).map(|(i, _)| n - 1 - i as u64).collect())
    }

    pub fn weight(&self) -> u64 {
        self.0.len() as u64
    }
}

pub fn rank(x: &BitSequence, k: u64) -> Result<BigUint> {
    let actual = x.count_ones() as u64;
    if actual != k {
        return Err(Error::WeightMismatch { expected: k, actual });
    }
    Ok(rank_scan(x).0.to_biguint())
}

/// Returns (rank, C(n, k)).
pub(crate) fn rank_scan(x: &BitSequence) -> (Nat, Nat) {
    let mut acc = Nat::zero();
    // C(l, c) with c ones seen below position l.
    let mut run = Scaled::new(Nat::one());
    let mut c = 0u64;
    for (l, bit) in x.iter().rev().enumerate() {
        let l = l as u64;
        if bit {
            let z = l - c;
            if z > 0 {
                run.scale(z, c + 1);
                acc.add_assign(run.exact());
                run.scale(l + 1, z);
            }
            c += 1;
        } else if c > 0 {
            run.scale(l + 1, l + 1 - c);
        }
    }
    (acc, run.into_exact())
}

pub fn unrank(r: &BigUint, n: u64, k: u64) -> Result<BitSequence> {
    if k > n {
        return Err(Error::WeightOutOfRange { k, n });
    }
    let total = binomial_nat(n, k);
    let r = Nat::from_biguint(r);
    if r >= total {
        return Err(Error::RankOutOfRange { n, k });
    }
    Ok(unrank_scan(r, n, k, total))
}

/// Greedy decomposition from the top position down. `total` is C(n, k) and
/// `r < total`.
pub(crate) fn unrank_scan(mut r: Nat, n: u64, k: u64, total: Nat) -> BitSequence {
    let mut out = BitSequence::zeros(n as usize);
    if k == 0 {
        return out;
    }
    if k == n {
        return BitSequence::from_bools(std::iter::repeat(true).take(n as usize));
    }
    // C(l, i) for the current position l and ones still to place i.
    let mut t = Scaled::new(total);
    t.scale(n - k, n);
    let mut r_log2 = r.log2();
    let mut i = k;
    for l in (0..n).rev() {
        if i == 0 {
            break;
        }
        if i == l + 1 {
            for j in 0..=l {
                out.set((n - 1 - j) as usize, true);
            }
            break;
        }
        let diff = r_log2 - t.log2();
        let one = if diff > 1e-6 {
            true
        } else if diff < -1e-6 {
            false
        } else {
            r >= *t.exact()
        };
        if one {
            r.sub_assign(t.exact());
            r_log2 = r.log2();
            out.set((n - 1 - l) as usize, true);
            t.scale(i, l);
            i -= 1;
        } else if l == i {
            for j in 0..l {
                out.set((n - 1 - j) as usize, true);
            }
            break;
        } else {
            t.scale(l - i, l);
        }
    }
    out
}
