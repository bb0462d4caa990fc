use bzc::baselines::{is_prefix_free, kraft_sum, sequence_of};
use bzc::codec::{
    codeword_length, compress_file, decode_blocks, decode_sequence, decompress_container, decompress_file,
    encode_blocks, encode_sequence, BernoulliModel,
};
use bzc::combinatorics::rank_bit_width;
use bzc::countcode::{count_code_length, derive_params};
use bzc::{BitReader, BitSequence, Error};
use proptest::prelude::*;

const P_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[test]
fn exhaustive_roundtrip() {
    for n in 1..=16u64 {
        for p in P_GRID {
            let model = BernoulliModel::new(n, p).unwrap();
            let params = derive_params(n, p).unwrap();
            for i in 0..1u64 << n {
                let x = sequence_of(i, n);
                let k = x.count_ones() as u64;
                let c = encode_sequence(&x, &model).unwrap();
                assert_eq!(
                    c.len() as u64,
                    count_code_length(k, &params).unwrap() + rank_bit_width(n, k),
                    "n={n} p={p} x={x}"
                );
                let mut r = BitReader::from_bits(&c);
                assert_eq!(decode_sequence(&mut r, &model).unwrap(), x);
                assert_eq!(r.remaining(), 0);
            }
        }
    }
}

#[test]
fn full_codebook_is_prefix_free() {
    for n in 1..=12u64 {
        for p in P_GRID {
            let model = BernoulliModel::new(n, p).unwrap();
            let book: Vec<BitSequence> =
                (0..1u64 << n).map(|i| encode_sequence(&sequence_of(i, n), &model).unwrap()).collect();
            assert!(is_prefix_free(&book), "n={n} p={p}");
            assert!(kraft_sum(book.iter().map(|c| c.len() as u64)) <= 1.0);
        }
    }
}

#[test]
fn worked_example() {
    let x: BitSequence = "1100010".parse().unwrap();
    let model = BernoulliModel::new(7, 0.2).unwrap();
    let c = encode_sequence(&x, &model).unwrap();
    assert_eq!(c.len() as u64, codeword_length(&model, 3).unwrap());
    assert_eq!(decode_sequence(&mut BitReader::from_bits(&c), &model).unwrap(), x);
}

#[test]
fn rank_past_the_end() {
    // n=4, p=0.5, k=2: count code "00" then rank 6 in 3 bits.
    let model = BernoulliModel::new(4, 0.5).unwrap();
    let bad: BitSequence = "00110".parse().unwrap();
    assert_eq!(decode_sequence(&mut BitReader::from_bits(&bad), &model), Err(Error::RankOutOfRange { n: 4, k: 2 }));
}

#[test]
fn container_errors() {
    let x: BitSequence = "0001000000100000000010000000000010".parse().unwrap();
    let bytes = compress_file(&x, 0.1, 0).unwrap();
    assert_eq!(decompress_file(&bytes).unwrap(), x);
    assert!(matches!(decompress_file(&bytes[..bytes.len() - 1]), Err(Error::PayloadExhausted { .. })));
    let mut padded = bytes.clone();
    padded.push(0);
    assert!(matches!(decompress_file(&padded), Err(Error::BadHeader(_))));
    assert!(matches!(compress_file(&x, 1.0, 0), Err(Error::BadProbability(_))));
}

fn sequence(max: usize) -> impl Strategy<Value = BitSequence> {
    (1..max, 0.01f64..0.99).prop_flat_map(|(n, p)| {
        prop::collection::vec(prop::bool::weighted(p), n).prop_map(BitSequence::from_bools)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn long_roundtrip(x in sequence(5000), p in 0.001f64..0.999) {
        let model = BernoulliModel::new(x.len() as u64, p).unwrap();
        let c = encode_sequence(&x, &model).unwrap();
        let k = x.count_ones() as u64;
        prop_assert_eq!(c.len() as u64, codeword_length(&model, k).unwrap());
        prop_assert_eq!(decode_sequence(&mut BitReader::from_bits(&c), &model).unwrap(), x);
    }

    #[test]
    fn block_additivity(x in sequence(3000), p in 0.01f64..0.99, b in 1u64..400) {
        let n = x.len() as u64;
        let c = encode_blocks(&x, p, b).unwrap();
        let mut want = BitSequence::new();
        let mut start = 0;
        while start < n {
            let m = b.min(n - start);
            let part = x.slice(start as usize, (start + m) as usize);
            want.extend_from(&encode_sequence(&part, &BernoulliModel::new(m, p).unwrap()).unwrap());
            start += m;
        }
        prop_assert_eq!(&c, &want);
        prop_assert_eq!(decode_blocks(&mut BitReader::from_bits(&c), n, p, b).unwrap(), x);
    }

    #[test]
    fn containers_roundtrip(x in sequence(2000), p in 0.01f64..0.99, b in 0u32..100) {
        let bytes = compress_file(&x, p, b).unwrap();
        let (h, y) = decompress_container(&bytes).unwrap();
        prop_assert_eq!(h.block_len, b);
        prop_assert_eq!(h.n_or_v, x.len() as u64);
        prop_assert_eq!(y, x);
    }

    #[test]
    fn corrupted_containers_fail_cleanly(x in sequence(300), p in 0.01f64..0.99, at in any::<usize>(), mask in 1u8..) {
        let mut bytes = compress_file(&x, p, 0).unwrap();
        let i = at % bytes.len();
        bytes[i] ^= mask;
        // Any outcome but a panic is acceptable; a successful decode must be
        // a sequence of the declared length.
        if let Ok((h, y)) = decompress_container(&bytes) {
            prop_assert_eq!(y.len() as u64, h.n_or_v);
        }
    }
}
