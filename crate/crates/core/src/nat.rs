//! Little-endian limb vectors with the few in-place operations the rank
//! scans need: multiply by a word, exact division by a word, add, subtract.

use std::cmp::Ordering;

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Nat {
    limbs: Vec<u64>,
}

fn inverse_mod_word(odd: u64) -> u64 {
    debug_assert!(odd & 1 == 1);
    let mut inv = odd;
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(odd.wrapping_mul(inv)));
    }
    inv
}

impl Nat {
    pub fn zero() -> Self {
        Nat { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Nat { limbs: vec![1] }
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        let mut n = Nat { limbs: v.to_u64_digits() };
        n.trim();
        n
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut digits = Vec::with_capacity(self.limbs.len() * 2);
        for &l in &self.limbs {
            digits.push(l as u32);
            digits.push((l >> 32) as u32);
        }
        BigUint::new(digits)
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }


    pub fn bits(&self) -> u64 {
        match self.limbs.last() {
            None => 0,
            Some(&top) => self.limbs.len() as u64 * 64 - top.leading_zeros() as u64,
        }
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// log2 of the value, accurate to about 1e-15 relative; -inf for zero.
    pub fn log2(&self) -> f64 {
        let bits = self.bits();
        if bits == 0 {
            return f64::NEG_INFINITY;
        }
        if bits <= 64 {
            return (self.limbs[0] as f64).log2();
        }
        let len = self.limbs.len();
        let sh = self.limbs[len - 1].leading_zeros();
        let mut top = self.limbs[len - 1] << sh;
        if sh > 0 {
            top |= self.limbs[len - 2] >> (64 - sh);
        }
        (top as f64).log2() + (bits - 64) as f64
    }

    pub fn shr_assign(&mut self, s: u32) {
        debug_assert!(s < 64);
        if s == 0 || self.limbs.is_empty() {
            return;
        }
        let len = self.limbs.len();
        for i in 0..len - 1 {
            self.limbs[i] = (self.limbs[i] >> s) | (self.limbs[i + 1] << (64 - s));
        }
        self.limbs[len - 1] >>= s;
        self.trim();
    }

    /// self = self * m / d, where the division is known to be exact.
    pub fn mul_div_exact(&mut self, m: u64, d: u64) {
        debug_assert!(d > 0);
        if m == 0 {
            self.limbs.clear();
        }
        if self.limbs.is_empty() {
            return;
        }
        let tz = d.trailing_zeros();
        let odd = d >> tz;
        if odd == 1 {
            self.mul_word(m);
        } else {
            let inv = inverse_mod_word(odd);
            let mut mul_carry = 0u64;
            let mut borrow = 0u64;
            for limb in self.limbs.iter_mut() {
                let t = *limb as u128 * m as u128 + mul_carry as u128;
                mul_carry = (t >> 64) as u64;
                let (x, under) = (t as u64).overflowing_sub(borrow);
                let q = x.wrapping_mul(inv);
                *limb = q;
                borrow = ((q as u128 * odd as u128) >> 64) as u64 + under as u64;
            }
            let (x, _) = mul_carry.overflowing_sub(borrow);
            let q = x.wrapping_mul(inv);
            debug_assert_eq!(((q as u128 * odd as u128) >> 64) as u64, 0);
            if q != 0 {
                self.limbs.push(q);
            }
            self.trim();
        }
        self.shr_assign(tz);
    }

    pub fn mul_word(&mut self, m: u64) {
        let mut carry = 0u64;
        for limb in self.limbs.iter_mut() {
            let t = *limb as u128 * m as u128 + carry as u128;
            *limb = t as u64;
            carry = (t >> 64) as u64;
        }
        if carry != 0 {
            self.limbs.push(carry);
        }
        self.trim();
    }

    pub fn add_assign(&mut self, other: &Nat) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        let mut carry = false;
        for (i, a) in self.limbs.iter_mut().enumerate() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            if b == 0 && !carry && i >= other.limbs.len() {
                break;
            }
            let (s1, c1) = a.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *a = s2;
            carry = c1 || c2;
        }
        if carry {
            self.limbs.push(1);
        }
    }

    /// self -= other; requires self >= other.
    pub fn sub_assign(&mut self, other: &Nat) {
        debug_assert!(Ord::cmp(&*self, other) != Ordering::Less);
        let mut borrow = false;
        for (i, a) in self.limbs.iter_mut().enumerate() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            if b == 0 && !borrow && i >= other.limbs.len() {
                break;
            }
            let (s1, c1) = a.overflowing_sub(b);
            let (s2, c2) = s1.overflowing_sub(borrow as u64);
            *a = s2;
            borrow = c1 || c2;
        }
        debug_assert!(!borrow);
        self.trim();
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

/// A big value times a pending word-sized rational factor. Multiplicative
/// updates accumulate in the factor and are applied to the limbs in one pass
/// when the factor would overflow or the exact value is needed.
#[derive(Debug, Clone)]
pub(crate) struct Scaled {
    value: Nat,
    num: u64,
    den: u64,
    log2: f64,
}

impl Scaled {
    pub fn new(value: Nat) -> Self {
        let log2 = value.log2();
        Scaled { value, num: 1, den: 1, log2 }
    }

    /// Approximate log2 of the current (scaled) value.
    pub fn log2(&self) -> f64 {
        self.log2
    }

    /// Multiplies by a/b. The product must stay an integer once all pending
    /// factors are applied.
    pub fn scale(&mut self, a: u64, b: u64) {
        if a == b {
            return;
        }
        let delta = (a as f64).log2() - (b as f64).log2();
        if let (Some(n), Some(d)) = (self.num.checked_mul(a), self.den.checked_mul(b)) {
            self.num = n;
            self.den = d;
            self.log2 += delta;
            return;
        }
        let g = num_integer::gcd(self.num, self.den);
        self.num /= g;
        self.den /= g;
        if let (Some(n), Some(d)) = (self.num.checked_mul(a), self.den.checked_mul(b)) {
            self.num = n;
            self.den = d;
            self.log2 += delta;
            return;
        }
        self.flush();
        self.num = a;
        self.den = b;
        self.log2 += delta;
    }

    pub fn flush(&mut self) {
        if self.num != 1 || self.den != 1 {
            self.value.mul_div_exact(self.num, self.den);
            self.num = 1;
            self.den = 1;
        }
        self.log2 = self.value.log2();
    }

    pub fn exact(&mut self) -> &Nat {
        self.flush();
        &self.value
    }

    pub fn into_exact(mut self) -> Nat {
        self.flush();
        self.value
    }
}
