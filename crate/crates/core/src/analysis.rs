//! Entropy quantities and the exact expected code length
//! E(L) = Σ_k C(n,k) p^k q^(n-k) (L_k + ⌈log2 C(n,k)⌉).

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::bitio::check_probability;
use crate::codec::block_lengths;
use crate::combinatorics::width_of;
use crate::countcode::{derive_params, distance_class, loglog_t_width};
use crate::error::{Error, Result};
use crate::nat::{Nat, Scaled};

/// Width convention for the T field when evaluating expected lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WidthMode {
    /// The width the codec uses: max(1, ⌈log2(t_max+1)⌉).
    Capacity,
    /// ⌈log2 log2 n⌉.
    LogLog,
}

impl fmt::Display for WidthMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthMode::Capacity => "capacity",
            WidthMode::LogLog => "loglog",
        })
    }
}

impl FromStr for WidthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "capacity" => Ok(WidthMode::Capacity),
            "loglog" => Ok(WidthMode::LogLog),
            _ => Err(Error::Parse(format!("unknown width mode {s:?}"))),
        }
    }
}

fn check_model(n: u64, p: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidModel("n must be at least 1".into()));
    }
    check_probability(p).map_err(|_| Error::InvalidModel(format!("p={p} outside (0,1)")))
}

/// h(p) in bits.
pub fn bernoulli_entropy(p: f64) -> Result<f64> {
    check_probability(p).map_err(|_| Error::InvalidProbability(p))?;
    let q = 1.0 - p;
    Ok(-p * p.log2() - q * q.log2())
}

/// n·h(p).
pub fn sequence_entropy(n: u64, p: f64) -> Result<f64> {
    check_model(n, p)?;
    Ok(n as f64 * bernoulli_entropy(p)?)
}

/// pmf of Binomial(n, p) for k = 0..=n, via the log-space ratio recurrence
/// started at the mode.
pub fn binomial_pmf(n: u64, p: f64) -> Result<Vec<f64>> {
    check_model(n, p)?;
    let q = 1.0 - p;
    let (lp, lq) = (p.ln(), q.ln());
    let mode = (((n + 1) as f64 * p).floor() as u64).min(n);
    let m = mode.min(n - mode);
    let ln_binom = compensated_sum((1..=m).map(|i| ((n - m + i) as f64).ln() - (i as f64).ln()));
    let mut logs = vec![0.0f64; n as usize + 1];
    logs[mode as usize] = compensated_sum([ln_binom, mode as f64 * lp, (n - mode) as f64 * lq]);
    for k in mode..n {
        logs[k as usize + 1] = logs[k as usize] + ((n - k) as f64).ln() + lp - ((k + 1) as f64).ln() - lq;
    }
    for k in (0..mode).rev() {
        logs[k as usize] = logs[k as usize + 1] + ((k + 1) as f64).ln() + lq - ((n - k) as f64).ln() - lp;
    }
    Ok(logs.into_iter().map(f64::exp).collect())
}

/// ⌈log2 C(n,k)⌉ for k = 0..=n, exact.
pub fn rank_widths(n: u64) -> Vec<u64> {
    let mut w = vec![0u64; n as usize + 1];
    let mut c = Scaled::new(Nat::one());
    for k in 0..=n / 2 {
        if k > 0 {
            c.scale(n - k + 1, k);
        }
        let width = width_of(c.exact());
        w[k as usize] = width;
        w[(n - k) as usize] = width;
    }
    w
}

/// Count-code lengths L_k for k = 0..=n.
pub fn count_lengths(n: u64, p: f64, mode: WidthMode) -> Result<Vec<u64>> {
    let params = derive_params(n, p)?;
    let t_width = match mode {
        WidthMode::Capacity => params.t_width,
        WidthMode::LogLog => {
            if n < 2 {
                return Err(Error::InvalidModel("loglog width needs n >= 2".into()));
            }
            loglog_t_width(n)
        }
    };
    Ok((0..=n)
        .map(|k| 1 + t_width as u64 + distance_class(k.abs_diff(params.floor_np)) as u64)
        .collect())
}

/// Σ a_i with Neumaier compensation.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn exact_mean_length(n: u64, p: f64, mode: WidthMode) -> Result<f64> {
    let pmf = binomial_pmf(n, p)?;
    let lens = count_lengths(n, p, mode)?;
    let widths = rank_widths(n);
    Ok(compensated_sum((0..=n as usize).map(|k| pmf[k] * (lens[k] + widths[k]) as f64)))
}

/// Expected block-mode length: the sum over chunks of their exact means.
pub fn block_exact_mean(total_len: u64, p: f64, block_len: u64, mode: WidthMode) -> Result<f64> {
    if block_len == 0 || total_len == 0 {
        return Err(Error::InvalidModel("block and total length must be positive".into()));
    }
    let full = total_len / block_len;
    let rest = total_len % block_len;
    debug_assert_eq!(block_lengths(total_len, block_len).count() as u64, full + (rest > 0) as u64);
    let mut mean = 0.0;
    if full > 0 {
        mean += full as f64 * exact_mean_length(block_len, p, mode)?;
    }
    if rest > 0 {
        mean += exact_mean_length(rest, p, mode)?;
    }
    Ok(mean)
}

/// n·h(p) + log2 log2 n + log2 √(1/(2πe)) + 3.
pub fn mean_length_upper_bound(n: u64, p: f64) -> Result<f64> {
    check_model(n, p)?;
    if n < 2 {
        return Err(Error::InvalidModel("bound needs n >= 2".into()));
    }
    Ok(sequence_entropy(n, p)? + (n as f64).log2().log2() - 0.5 * (2.0 * PI * E).log2() + 3.0)
}

/// ½·log2(2πe·npq).
pub fn binomial_entropy_approx(n: u64, p: f64) -> Result<f64> {
    check_model(n, p)?;
    Ok(0.5 * (2.0 * PI * E * n as f64 * p * (1.0 - p)).log2())
}

/// Entropy of the weight distribution, summed from the pmf.
pub fn binomial_entropy_exact(n: u64, p: f64) -> Result<f64> {
    let pmf = binomial_pmf(n, p)?;
    Ok(compensated_sum(pmf.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadCheck {
    pub exact_mad: f64,
    pub bound: f64,
    pub holds: bool,
}

/// E|k - np| by direct summation against √(npq).
pub fn verify_mad_bound(n: u64, p: f64) -> Result<MadCheck> {
    let pmf = binomial_pmf(n, p)?;
    let np = n as f64 * p;
    let exact_mad = compensated_sum(pmf.iter().enumerate().map(|(k, &w)| w * (k as f64 - np).abs()));
    let bound = (np * (1.0 - p)).sqrt();
    Ok(MadCheck { exact_mad, bound, holds: exact_mad <= bound })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthReport {
    pub n: u64,
    pub p: f64,
    pub entropy_bits: f64,
    pub exact_mean_len: f64,
    pub upper_bound: f64,
    pub binomial_entropy_approx: f64,
    pub mad_bound: f64,
}

/// All of the above for one model; the upper bound is NaN for n = 1.
pub fn length_report(n: u64, p: f64) -> Result<LengthReport> {
    Ok(LengthReport {
        n,
        p,
        entropy_bits: sequence_entropy(n, p)?,
        exact_mean_len: exact_mean_length(n, p, WidthMode::Capacity)?,
        upper_bound: mean_length_upper_bound(n, p).unwrap_or(f64::NAN),
        binomial_entropy_approx: binomial_entropy_approx(n, p)?,
        mad_bound: (n as f64 * p * (1.0 - p)).sqrt(),
    })
}
