//! The weight code C(k) = F ‖ T ‖ U.
//!
//! F says on which side of ⌊np⌋ the weight lies, T holds t = ⌊log2(d+1)⌋ in
//! a fixed number of bits and U holds the low t bits of d+1, where
//! d = |k - ⌊np⌋|. Weights near the expected count get short codewords.
//!
//! T is `t_width = max(1, ⌈log2(t_max+1)⌉)` bits wide, with t_max the largest
//! t any weight in 0..=n can produce, so every weight is representable.

use crate::bitio::{check_probability, BitReader, BitSequence, BitWriter};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountCodeParams {
    pub n: u64,
    pub p: f64,
    pub floor_np: u64,
    pub d_max: u64,
    pub t_max: u32,
    pub t_width: u32,
}

/// Decomposition of one count codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountCode {
    pub f: bool,
    pub t: u32,
    pub u: u64,
    pub d: u64,
}

fn bit_length(x: u64) -> u32 {
    64 - x.leading_zeros()
}

/// ⌊log2(d+1)⌋
pub fn distance_class(d: u64) -> u32 {
    bit_length(d.saturating_add(1)) - 1
}

pub fn derive_params(n: u64, p: f64) -> Result<CountCodeParams> {
    if n == 0 {
        return Err(Error::InvalidModel("n must be at least 1".into()));
    }
    if check_probability(p).is_err() {
        return Err(Error::InvalidModel(format!("p={p} outside (0,1)")));
    }
    let floor_np = (n as f64 * p).floor() as u64;
    let d_max = floor_np.max(n - floor_np);
    let t_max = distance_class(d_max);
    let t_width = bit_length(t_max as u64).max(1);
    Ok(CountCodeParams { n, p, floor_np, d_max, t_max, t_width })
}

/// T width used by the original construction, ⌈log2 log2 n⌉: the smallest
/// t with n ≤ 2^(2^t). Only meaningful for n ≥ 2.
pub fn loglog_t_width(n: u64) -> u32 {
    let mut t = 0;
    while t < 6 && (n as u128) > 1u128 << (1u32 << t) {
        t += 1;
    }
    t
}

impl CountCodeParams {
    pub fn code(&self, k: u64) -> Result<CountCode> {
        if k > self.n {
            return Err(Error::WeightOutOfRange { k, n: self.n });
        }
        let f = !((k as f64) <= self.n as f64 * self.p);
        let d = k.abs_diff(self.floor_np);
        let t = distance_class(d);
        let u = d + 1 - (1u64 << t);
        Ok(CountCode { f, t, u, d })
    }

    pub fn code_length(&self, k: u64) -> Result<u64> {
        let c = self.code(k)?;
        Ok(1 + self.t_width as u64 + c.t as u64)
    }

    pub fn write(&self, w: &mut BitWriter, k: u64) -> Result<()> {
        let c = self.code(k)?;
        w.write_bit(c.f);
        w.write_uint(c.t as u64, self.t_width as usize);
        w.write_uint(c.u, c.t as usize);
        Ok(())
    }

    /// Reads one codeword, returning k.
    pub fn read(&self, r: &mut BitReader<'_>) -> Result<u64> {
        let f = r.read_bit()?;
        let t = r.read_uint(self.t_width as usize)?;
        if t > 63 {
            return Err(Error::KOutOfRange { n: self.n });
        }
        let u = r.read_uint(t as usize)?;
        let d = (1u64 << t) - 1 + u;
        if f && d == 0 {
            return Err(Error::NonCanonical);
        }
        let k = if f { self.floor_np.checked_add(d) } else { self.floor_np.checked_sub(d) };
        match k {
            Some(k) if k <= self.n => Ok(k),
            _ => Err(Error::KOutOfRange { n: self.n }),
        }
    }
}

pub fn encode_count(k: u64, params: &CountCodeParams) -> Result<BitSequence> {
    let mut w = BitWriter::new();
    params.write(&mut w, k)?;
    Ok(w.into_bits())
}

/// Returns (k, bits consumed).
pub fn decode_count(r: &mut BitReader<'_>, params: &CountCodeParams) -> Result<(u64, usize)> {
    let start = r.position();
    let k = params.read(r)?;
    Ok((k, r.position() - start))
}

pub fn count_code_length(k: u64, params: &CountCodeParams) -> Result<u64> {
    params.code_length(k)
}
