use bzc::combinatorics::{binomial, rank, rank_bit_width, unrank, OnePositions};
use bzc::{BitSequence, Error};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

/// Pascal's triangle rows 0..=n.
fn pascal(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigUint::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// C(n,k) by the sequential product, 0 outside the triangle.
fn slow_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut c = BigUint::one();
    for j in 0..k {
        c = c * (n - j) / (j + 1);
    }
    c
}

fn word(v: u64, n: usize) -> BitSequence {
    BitSequence::from_uint(v, n)
}

#[test]
fn binomial_matches_pascal() {
    let rows = pascal(400);
    for n in 0..=400u64 {
        for k in 0..=n {
            assert_eq!(binomial(n, k as i64), rows[n as usize][k as usize], "C({n},{k})");
        }
        assert_eq!(binomial(n, n as i64 + 1), BigUint::zero());
        assert_eq!(binomial(n, -1), BigUint::zero());
    }
}

#[test]
fn binomial_frozen_residues() {
    // (n, k, C mod 1e9+7, bit length of C - 1), computed with an exact
    // arbitrary-precision reference.
    let cases: [(u64, i64, u64, u64); 8] = [
        (1000, 500, 159835829, 995),
        (5000, 2500, 248346497, 4994),
        (100000, 5000, 434941573, 28633),
        (100000, 50000, 149033233, 99992),
        (1 << 27, 200, 879791998, 4155),
        (1000000, 100000, 633170033, 468987),
        (4950, 49, 601636565, 393),
        (200, 100, 407336795, 196),
    ];
    let m = BigUint::from(1_000_000_007u64);
    for (n, k, residue, width) in cases {
        let c = binomial(n, k);
        assert_eq!((&c % &m).to_u64().unwrap(), residue, "C({n},{k}) mod p");
        assert_eq!(rank_bit_width(n, k as u64), width, "width C({n},{k})");
    }
}

#[test]
fn rank_width_small() {
    let rows = pascal(64);
    for n in 0..=64u64 {
        for k in 0..=n {
            let c = &rows[n as usize][k as usize];
            let want = if c.is_one() { 0 } else { (c - 1u32).bits() };
            assert_eq!(rank_bit_width(n, k), want, "n={n} k={k}");
        }
    }
    assert_eq!(rank_bit_width(4, 2), 3);
    assert_eq!(rank_bit_width(8, 1), 3);
    assert_eq!(rank_bit_width(5, 0), 0);
}

#[test]
fn rank_examples() {
    assert_eq!(rank(&"1101".parse().unwrap(), 3).unwrap(), BigUint::from(2u32));
    assert_eq!(rank(&"0111".parse().unwrap(), 3).unwrap(), BigUint::zero());
    assert_eq!(rank(&"1110".parse().unwrap(), 3).unwrap(), BigUint::from(3u32));
    assert_eq!(
        rank(&"1101".parse().unwrap(), 2),
        Err(Error::WeightMismatch { expected: 2, actual: 3 })
    );
    assert_eq!(unrank(&BigUint::from(2u32), 4, 3).unwrap().to_string(), "1101");
    assert_eq!(unrank(&BigUint::from(4u32), 4, 3), Err(Error::RankOutOfRange { n: 4, k: 3 }));
    assert_eq!(unrank(&BigUint::zero(), 4, 5), Err(Error::WeightOutOfRange { k: 5, n: 4 }));
}

/// Rank is the position in numeric order among words of equal weight, and
/// unrank inverts it, for every word with n ≤ 16.
#[test]
fn exhaustive_bijection() {
    for n in 0..=16usize {
        let mut next_rank = vec![0u64; n + 1];
        for v in 0..1u64 << n {
            let x = word(v, n);
            let k = v.count_ones() as usize;
            let r = rank(&x, k as u64).unwrap();
            assert_eq!(r, BigUint::from(next_rank[k]), "n={n} v={v:b}");
            next_rank[k] += 1;
            assert_eq!(unrank(&r, n as u64, k as u64).unwrap(), x);
        }
        for k in 0..=n {
            assert_eq!(BigUint::from(next_rank[k]), binomial(n as u64, k as i64));
        }
    }
}

#[test]
fn monotone_in_numeric_order() {
    for n in 1..=12usize {
        let mut last: Vec<Option<BigUint>> = vec![None; n + 1];
        for v in 0..1u64 << n {
            let k = v.count_ones() as usize;
            let r = rank(&word(v, n), k as u64).unwrap();
            if let Some(prev) = &last[k] {
                assert!(prev < &r);
            }
            last[k] = Some(r);
        }
    }
}

fn sparse_word(n: usize, ones: &[usize]) -> BitSequence {
    let mut x = BitSequence::zeros(n);
    for &i in ones {
        x.set(i % n, true);
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Σ C(l_i, i) over the one-positions, with zero terms for i > l_i
    /// kept in the sum.
    #[test]
    fn rank_matches_combinadic(n in 1usize..3000, ones in prop::collection::vec(any::<usize>(), 0..300)) {
        let x = sparse_word(n, &ones);
        let pos = OnePositions::of(&x);
        let k = pos.weight();
        let mut want = BigUint::zero();
        for (i, &l) in pos.0.iter().enumerate() {
            want += slow_binomial(l, i as u64 + 1);
        }
        let r = rank(&x, k).unwrap();
        prop_assert_eq!(&r, &want);
        prop_assert!(r < slow_binomial(n as u64, k));
        prop_assert_eq!(unrank(&r, n as u64, k).unwrap(), x);
    }

    #[test]
    fn unrank_then_rank(n in 1u64..2000, k_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = ((n as f64 * k_frac) as u64).min(n);
        let total = binomial(n, k as i64);
        let r = BigUint::from_bytes_le(&seed.to_le_bytes()) * BigUint::from(0x9e37_79b9_7f4a_7c15u64).pow(40) % &total;
        let x = unrank(&r, n, k).unwrap();
        prop_assert_eq!(x.len() as u64, n);
        prop_assert_eq!(x.count_ones() as u64, k);
        prop_assert_eq!(rank(&x, k).unwrap(), r);
    }

    #[test]
    fn extreme_ranks(n in 1u64..1500, k_frac in 0.0f64..=1.0) {
        let k = ((n as f64 * k_frac) as u64).min(n);
        let total = binomial(n, k as i64);
        let first = unrank(&BigUint::zero(), n, k).unwrap();
        let last = unrank(&(&total - 1u32), n, k).unwrap();
        let ones = |x: &BitSequence| x.iter().map(|b| b as u8).collect::<Vec<_>>();
        let mut lo = vec![0u8; (n - k) as usize];
        lo.extend(vec![1u8; k as usize]);
        let mut hi = vec![1u8; k as usize];
        hi.extend(vec![0u8; (n - k) as usize]);
        prop_assert_eq!(ones(&first), lo);
        prop_assert_eq!(ones(&last), hi);
    }
}
