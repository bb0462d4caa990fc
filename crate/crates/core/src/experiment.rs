//! Seeded Monte Carlo runs over the preset models, plus a throughput bench.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64`. Sample `s` of a run
//! with seed `seed` uses the generator seeded with `sample_seed(seed, s)`;
//! in block mode, block `b` of that sample is drawn from the generator
//! seeded with `sample_seed(seed, s) ^ b`. Every draw is independent of the
//! thread count.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{bernoulli_entropy, block_exact_mean, exact_mean_length, WidthMode};
use crate::bitio::{check_probability, BitReader, BitSequence};
use crate::codec::{block_lengths, decode_sequence, encode_blocks, encode_sequence, BernoulliModel};
use crate::error::{Error, Result};
use crate::graph::pair_count;

pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const CSV_HEADER: &str = "model,n,p,block_len,entropy_bits,exact_mean,mc_mean,mc_std,samples,seed,width_mode";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Bernoulli { n: u64, p: f64 },
    Graph { v: u64, p: f64 },
}

impl ModelSpec {
    pub fn p(&self) -> f64 {
        match *self {
            ModelSpec::Bernoulli { p, .. } | ModelSpec::Graph { p, .. } => p,
        }
    }

    /// n, or v for graphs.
    pub fn size(&self) -> u64 {
        match *self {
            ModelSpec::Bernoulli { n, .. } => n,
            ModelSpec::Graph { v, .. } => v,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Bernoulli { .. } => "bernoulli",
            ModelSpec::Graph { .. } => "graph",
        }
    }

    /// Length of the bit sequence a draw produces.
    pub fn sequence_len(&self) -> Result<u64> {
        match *self {
            ModelSpec::Bernoulli { n, .. } => Ok(n),
            ModelSpec::Graph { v, .. } => pair_count(v),
        }
    }

    pub fn entropy_bits(&self) -> Result<f64> {
        Ok(self.sequence_len()? as f64 * bernoulli_entropy(self.p())?)
    }

    fn validate(&self) -> Result<()> {
        check_probability(self.p()).map_err(|_| Error::InvalidModel(format!("p={} outside (0,1)", self.p())))?;
        if self.sequence_len()? == 0 {
            return Err(Error::InvalidModel("empty model".into()));
        }
        Ok(())
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSpec::Bernoulli { n, p } => write!(f, "Bernoulli({n},{p})"),
            ModelSpec::Graph { v, p } => write!(f, "G({v},{p})"),
        }
    }
}

/// One model together with how it is coded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case {
    pub model: ModelSpec,
    /// `None` is direct mode.
    pub block_len: Option<u64>,
}

impl Case {
    pub fn direct(model: ModelSpec) -> Self {
        Case { model, block_len: None }
    }

    pub fn block(model: ModelSpec, block_len: u64) -> Self {
        Case { model, block_len: Some(block_len) }
    }

    pub fn exact_mean(&self, mode: WidthMode) -> Result<f64> {
        let len = self.model.sequence_len()?;
        match self.block_len {
            None => exact_mean_length(len, self.model.p(), mode),
            Some(b) => block_exact_mean(len, self.model.p(), b, mode),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Table1,
    Table2,
    SweepP,
    SweepN,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(ExperimentKind::Table1),
            "table2" => Ok(ExperimentKind::Table2),
            "sweep-p" => Ok(ExperimentKind::SweepP),
            "sweep-n" => Ok(ExperimentKind::SweepN),
            _ => Err(Error::Parse(format!("unknown experiment {s:?}"))),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Table1 => "table1",
            ExperimentKind::Table2 => "table2",
            ExperimentKind::SweepP => "sweep-p",
            ExperimentKind::SweepN => "sweep-n",
        })
    }
}

pub const SWEEP_N: [u64; 6] = [10, 50, 100, 500, 1000, 5000];

pub fn preset(kind: ExperimentKind) -> Vec<Case> {
    use ModelSpec::{Bernoulli, Graph};
    match kind {
        ExperimentKind::Table1 => [
            Bernoulli { n: 50, p: 0.1 },
            Bernoulli { n: 50, p: 0.01 },
            Bernoulli { n: 20, p: 0.2 },
            Graph { v: 5, p: 0.1 },
            Graph { v: 8, p: 0.2 },
            Graph { v: 10, p: 0.1 },
        ]
        .into_iter()
        .map(Case::direct)
        .collect(),
        ExperimentKind::Table2 => vec![
            Case::block(Bernoulli { n: 200, p: 0.2 }, 5),
            Case::block(Bernoulli { n: 1000, p: 0.01 }, 50),
            Case::block(Graph { v: 20, p: 0.05 }, 10),
            Case::block(Graph { v: 100, p: 0.01 }, 25),
        ],
        ExperimentKind::SweepP => (1..=50).map(|i| Case::direct(Bernoulli { n: 50, p: i as f64 / 100.0 })).collect(),
        ExperimentKind::SweepN => SWEEP_N.iter().map(|&n| Case::direct(Bernoulli { n, p: 0.1 })).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub samples: u64,
    pub seed: u64,
    pub width_mode: WidthMode,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig { kind, samples: DEFAULT_SAMPLES, seed: 0, width_mode: WidthMode::Capacity }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub case: Case,
    pub entropy_bits: f64,
    pub exact_mean: f64,
    pub mc_mean: f64,
    pub mc_std: f64,
    pub samples: u64,
    pub seed: u64,
    pub width_mode: WidthMode,
}

impl ExperimentRow {
    /// |mc_mean - exact_mean| ≤ 5·mc_std/√samples.
    pub fn consistent(&self) -> bool {
        (self.mc_mean - self.exact_mean).abs() <= 5.0 * self.mc_std / (self.samples as f64).sqrt()
    }

    pub fn csv_fields(&self) -> [String; 11] {
        [
            self.case.model.kind().to_string(),
            self.case.model.size().to_string(),
            self.case.model.p().to_string(),
            self.case.block_len.map(|b| b.to_string()).unwrap_or_default(),
            format!("{:.6}", self.entropy_bits),
            format!("{:.6}", self.exact_mean),
            format!("{:.6}", self.mc_mean),
            format!("{:.6}", self.mc_std),
            self.samples.to_string(),
            self.seed.to_string(),
            self.width_mode.to_string(),
        ]
    }
}

/// Seed of sample `s`: the first output of the generator seeded with `seed`
/// on stream `s`.
pub fn sample_seed(seed: u64, s: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(s);
    rng.next_u64()
}

/// `len` bits, each 1 iff the next uniform draw in [0,1) is below p.
pub fn draw_instance<R: Rng>(len: u64, p: f64, rng: &mut R) -> BitSequence {
    (0..len).map(|_| rng.gen::<f64>() < p).collect()
}

/// One sample for a case: direct mode draws from one generator, block mode
/// from one generator per block.
pub fn draw_case(case: &Case, seed: u64) -> Result<BitSequence> {
    let len = case.model.sequence_len()?;
    let p = case.model.p();
    Ok(match case.block_len {
        None => draw_instance(len, p, &mut ChaCha8Rng::seed_from_u64(seed)),
        Some(b) => {
            let mut out = BitSequence::with_capacity(len as usize);
            for (i, m) in block_lengths(len, b).enumerate() {
                out.extend_from(&draw_instance(m, p, &mut ChaCha8Rng::seed_from_u64(seed ^ i as u64)));
            }
            out
        }
    })
}

/// Compressed payload length of one instance.
pub fn compressed_len(case: &Case, x: &BitSequence) -> Result<u64> {
    let p = case.model.p();
    let bits = match case.block_len {
        None => encode_sequence(x, &BernoulliModel::new(x.len() as u64, p)?)?,
        Some(b) => encode_blocks(x, p, b)?,
    };
    Ok(bits.len() as u64)
}

/// Mean and sample standard deviation, with Welford's update.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let (mut mean, mut m2) = (0.0, 0.0);
    for (i, &x) in xs.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let std = if xs.len() > 1 { (m2 / (xs.len() - 1) as f64).sqrt() } else { 0.0 };
    (mean, std)
}

pub fn run_case(case: &Case, samples: u64, seed: u64, width_mode: WidthMode) -> Result<ExperimentRow> {
    case.model.validate()?;
    if samples == 0 {
        return Err(Error::InvalidModel("samples must be at least 1".into()));
    }
    if case.block_len == Some(0) {
        return Err(Error::InvalidModel("block_len must be at least 1".into()));
    }
    let lens = (0..samples)
        .into_par_iter()
        .map(|s| compressed_len(case, &draw_case(case, sample_seed(seed, s))?).map(|l| l as f64))
        .collect::<Result<Vec<_>>>()?;
    let (mc_mean, mc_std) = mean_std(&lens);
    Ok(ExperimentRow {
        case: *case,
        entropy_bits: case.model.entropy_bits()?,
        exact_mean: case.exact_mean(width_mode)?,
        mc_mean,
        mc_std,
        samples,
        seed,
        width_mode,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    preset(config.kind)
        .iter()
        .map(|case| run_case(case, config.samples, config.seed, config.width_mode))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: u64,
    /// Best encode+decode wall time over the repetitions, in seconds.
    pub seconds: f64,
    pub encoded_bits: u64,
    /// time(n)/time(n/2) when n/2 was also measured.
    pub ratio: Option<f64>,
}

/// Times a direct-mode encode and decode for each n. Zero repetitions gives
/// an empty report.
pub fn bench(ns: &[u64], p: f64, repetitions: u32, seed: u64) -> Result<Vec<BenchRow>> {
    check_probability(p)?;
    if repetitions == 0 {
        return Ok(Vec::new());
    }
    let mut rows: Vec<BenchRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let model = BernoulliModel::new(n, p)?;
        let x = draw_instance(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut best = f64::INFINITY;
        let mut encoded_bits = 0;
        for _ in 0..repetitions {
            let start = Instant::now();
            let code = encode_sequence(&x, &model)?;
            let y = decode_sequence(&mut BitReader::from_bits(&code), &model)?;
            best = best.min(start.elapsed().as_secs_f64());
            if y != x {
                return Err(Error::InvalidModel(format!("roundtrip mismatch at n={n}")));
            }
            encoded_bits = code.len() as u64;
        }
        let ratio = rows.iter().find(|r| 2 * r.n == n).map(|r| best / r.seconds);
        rows.push(BenchRow { n, seconds: best, encoded_bits, ratio });
    }
    Ok(rows)
}
