use bzc::baselines::{is_prefix_free, kraft_sum};
use bzc::countcode::{count_code_length, decode_count, derive_params, encode_count};
use bzc::{BitReader, BitSequence};
use proptest::prelude::*;

const P_GRID: [f64; 9] = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99];

/// Codeword spelled out from the definition with string formatting.
fn reference_codeword(n: u64, p: f64, k: u64) -> String {
    let floor_np = (n as f64 * p).floor() as u64;
    let d_max = floor_np.max(n - floor_np);
    let class = |d: u64| 63 - (d + 1).leading_zeros();
    let t_max = class(d_max);
    let width = (32 - t_max.leading_zeros()).max(1) as usize;
    let d = k.abs_diff(floor_np);
    let t = class(d);
    let f = if (k as f64) <= n as f64 * p { "0" } else { "1" };
    let u = if t == 0 { String::new() } else { format!("{:0w$b}", d + 1 - (1 << t), w = t as usize) };
    format!("{f}{:0width$b}{u}", t)
}

fn codebook(n: u64, p: f64) -> Vec<BitSequence> {
    let params = derive_params(n, p).unwrap();
    (0..=n).map(|k| encode_count(k, &params).unwrap()).collect()
}

#[test]
fn matches_reference_spelling() {
    for n in 1..=256u64 {
        for p in P_GRID {
            let params = derive_params(n, p).unwrap();
            for k in 0..=n {
                assert_eq!(encode_count(k, &params).unwrap().to_string(), reference_codeword(n, p, k), "n={n} p={p} k={k}");
            }
        }
    }
}

#[test]
fn roundtrip_prefix_free_kraft() {
    for n in 1..=256u64 {
        for p in P_GRID {
            let params = derive_params(n, p).unwrap();
            let book = codebook(n, p);
            for (k, c) in book.iter().enumerate() {
                let mut r = BitReader::from_bits(c);
                assert_eq!(decode_count(&mut r, &params).unwrap(), (k as u64, c.len()));
                assert_eq!(count_code_length(k as u64, &params).unwrap(), c.len() as u64);
            }
            assert!(is_prefix_free(&book), "n={n} p={p}");
            assert!(kraft_sum(book.iter().map(|c| c.len() as u64)) <= 1.0, "n={n} p={p}");
        }
    }
}

#[test]
fn shorter_near_the_mean() {
    for n in 1..=256u64 {
        for p in P_GRID {
            let params = derive_params(n, p).unwrap();
            let mut by_d: Vec<(u64, u64)> = (0..=n)
                .map(|k| (k.abs_diff(params.floor_np), count_code_length(k, &params).unwrap()))
                .collect();
            by_d.sort();
            assert!(by_d.windows(2).all(|w| w[0].1 <= w[1].1), "n={n} p={p}");
        }
    }
}

proptest! {
    #[test]
    fn roundtrip_large(n in 1u64..1_000_000_000, p in 0.0001f64..0.9999, frac in 0.0f64..=1.0) {
        let params = derive_params(n, p).unwrap();
        let k = ((n as f64 * frac) as u64).min(n);
        let c = encode_count(k, &params).unwrap();
        prop_assert_eq!(c.to_string(), reference_codeword(n, p, k));
        let mut r = BitReader::from_bits(&c);
        prop_assert_eq!(decode_count(&mut r, &params).unwrap(), (k, c.len()));
    }

    #[test]
    fn garbage_never_panics(n in 1u64..500, p in 0.001f64..0.999, v in prop::collection::vec(any::<bool>(), 0..40)) {
        let params = derive_params(n, p).unwrap();
        let s = BitSequence::from_bools(v);
        let mut r = BitReader::from_bits(&s);
        if let Ok((k, used)) = decode_count(&mut r, &params) {
            prop_assert!(k <= n);
            prop_assert_eq!(encode_count(k, &params).unwrap(), s.slice(0, used));
        }
    }
}
