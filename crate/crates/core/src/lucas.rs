//! Generalized Lucas sequences `U_0 = 0, U_1 = 1, U_{n+1} = r U_n + s U_{n-1}`,
//! their Binet form, and base-`b` repdigits.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{elementary, Ball, PrecisionPolicy};
use crate::error::{Error, Result};

/// The pair `(r, s)` defining a generalized Lucas sequence with `r^2 + 4s > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequenceParams {
    r: i64,
    s: i64,
}

impl SequenceParams {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        let params = SequenceParams { r, s };
        if !params.discriminant().is_positive() {
            return Err(Error::Param(format!(
                "discriminant r^2 + 4s must be positive, got {} for (r, s) = ({r}, {s})",
                params.discriminant()
            )));
        }
        Ok(params)
    }

    pub fn pell() -> Self {
        SequenceParams { r: 2, s: 1 }
    }

    pub fn fibonacci() -> Self {
        SequenceParams { r: 1, s: 1 }
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// `Δ = r^2 + 4s`.
    pub fn discriminant(&self) -> BigInt {
        let r = BigInt::from(self.r);
        &r * &r + BigInt::from(self.s) * 4
    }

    /// Exact test for `δ = (r + √Δ)/2 > 1`, i.e. `√Δ > 2 - r`.
    pub fn dominant_root_exceeds_one(&self) -> bool {
        if self.r > 2 {
            return true;
        }
        let two_minus_r = BigInt::from(2 - self.r);
        self.discriminant() > &two_minus_r * &two_minus_r
    }

    /// The bounds pipeline needs `s ∈ {-1, 1}` and `δ > 1`.
    pub fn require_pipeline(&self) -> Result<()> {
        if self.s != 1 && self.s != -1 {
            return Err(Error::Param(format!(
                "the bounds pipeline requires s in {{-1, 1}}, got s = {}",
                self.s
            )));
        }
        if !self.dominant_root_exceeds_one() {
            return Err(Error::Param(format!(
                "the bounds pipeline requires a dominant root above 1; (r, s) = ({}, {})",
                self.r, self.s
            )));
        }
        Ok(())
    }

    pub fn sqrt_discriminant(&self, prec: u32) -> Result<Ball> {
        elementary::sqrt_int(&self.discriminant(), prec)
    }

    /// `δ = (r + √Δ)/2`.
    pub fn delta(&self, prec: u32) -> Result<Ball> {
        let sd = self.sqrt_discriminant(prec)?;
        Ok((&Ball::from_i64(self.r, prec) + &sd).mul_2exp(-1))
    }

    /// `γ = (r - √Δ)/2`.
    pub fn gamma(&self, prec: u32) -> Result<Ball> {
        let sd = self.sqrt_discriminant(prec)?;
        Ok((&Ball::from_i64(self.r, prec) - &sd).mul_2exp(-1))
    }

    pub fn log_delta(&self, prec: u32) -> Result<Ball> {
        elementary::log(&self.delta(prec)?)
    }
}

/// `U_n` by exact iteration.
pub fn lucas_u(params: &SequenceParams, n: u64) -> BigInt {
    let r = BigInt::from(params.r);
    let s = BigInt::from(params.s);
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &r * &cur + &s * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `[U_0, U_1, ..., U_n_max]`.
pub fn lucas_terms(params: &SequenceParams, n_max: u64) -> Vec<BigInt> {
    let r = BigInt::from(params.r);
    let s = BigInt::from(params.s);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(BigInt::zero());
    if n_max >= 1 {
        out.push(BigInt::one());
    }
    for i in 2..=n_max as usize {
        let next = &r * &out[i - 1] + &s * &out[i - 2];
        out.push(next);
    }
    out
}

/// Enclosure of `(δ^n - γ^n)/(δ - γ)`.
pub fn binet(params: &SequenceParams, n: u64, prec: u32) -> Result<Ball> {
    let sd = params.sqrt_discriminant(prec)?;
    let r = Ball::from_i64(params.r, prec);
    let delta = (&r + &sd).mul_2exp(-1);
    let gamma = (&r - &sd).mul_2exp(-1);
    (delta.pow_u(n) - gamma.pow_u(n)).checked_div(&sd)
}

/// Certified check of `δ^(n-2) <= U_n <= δ^n` at one precision.
fn dominant_root_bounds_at(params: &SequenceParams, n: u64, prec: u32) -> Result<bool> {
    let u = lucas_u(params, n);
    let prec = prec.max(u.bits() as u32 + 64);
    let delta = params.delta(prec)?;
    let lower = delta.pow_u(n - 2);
    let upper = &lower * &delta.sqr();
    let undecided = || Error::undecided(format!("dominant-root bound at n = {n}"), prec);
    let below = lower.cmp_int(&u).ok_or_else(undecided)? != Ordering::Greater;
    let above = upper.cmp_int(&u).ok_or_else(undecided)? != Ordering::Less;
    Ok(below && above)
}

/// `δ^(n-2) <= U_n <= δ^n` as certified comparisons (requires `s ∈ {-1, 1}`, `n >= 2`).
pub fn check_dominant_root_bounds(
    params: &SequenceParams,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<bool> {
    if params.s != 1 && params.s != -1 {
        return Err(Error::Param("dominant-root bounds need s in {-1, 1}".into()));
    }
    if n < 2 {
        return Err(Error::Param("dominant-root bounds need n >= 2".into()));
    }
    policy.run(|prec| dominant_root_bounds_at(params, n, prec))
}

/// A base-`b` repdigit: the digit `a` repeated `k` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repdigit {
    pub a: u64,
    pub b: u64,
    pub k: u64,
    pub value: BigInt,
}

impl Repdigit {
    pub fn new(a: u64, b: u64, k: u64) -> Result<Self> {
        let value = repdigit_value(a, b, k)?;
        Ok(Repdigit { a, b, k, value })
    }
}

/// `a (b^k - 1)/(b - 1)`.
pub fn repdigit_value(a: u64, b: u64, k: u64) -> Result<BigInt> {
    if b < 2 {
        return Err(Error::Param(format!("base must be >= 2, got {b}")));
    }
    if a < 1 || a >= b {
        return Err(Error::Param(format!("digit must satisfy 1 <= a <= {}, got {a}", b - 1)));
    }
    if k < 1 {
        return Err(Error::Param("repdigit length must be >= 1".into()));
    }
    let k = usize::try_from(k).map_err(|_| Error::Param("repdigit length too large".into()))?;
    let bb = BigInt::from(b);
    let repunit = (num_traits::pow(bb.clone(), k) - 1u32) / (bb - 1u32);
    Ok(repunit * a)
}

fn digits_le(v: &BigUint, b: u64) -> Vec<u64> {
    if b <= 256 {
        return v.to_radix_le(b as u32).into_iter().map(u64::from).collect();
    }
    let base = BigUint::from(b);
    let mut out = Vec::new();
    let mut v = v.clone();
    while !v.is_zero() {
        let (q, r) = v.div_rem(&base);
        out.push(r.to_u64().expect("digit below base"));
        v = q;
    }
    out
}

/// `(a, k)` when every base-`b` digit of `v` equals `a`.
pub fn as_repdigit(v: &BigInt, b: u64) -> Option<(u64, u64)> {
    if b < 2 || !v.is_positive() {
        return None;
    }
    let digits = digits_le(v.magnitude(), b);
    let a = *digits.first()?;
    if a == 0 || digits.iter().any(|&d| d != a) {
        return None;
    }
    Some((a, digits.len() as u64))
}

/// A verified tuple with `U_n - U_m` equal to a repdigit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub n: u64,
    pub m: u64,
    pub repdigit: Repdigit,
}

impl Solution {
    /// Re-checks `U_n - U_m = a (b^k - 1)/(b - 1)` in exact arithmetic.
    pub fn verify(&self, params: &SequenceParams) -> bool {
        self.n > self.m
            && repdigit_value(self.repdigit.a, self.repdigit.b, self.repdigit.k).ok().as_ref()
                == Some(&self.repdigit.value)
            && lucas_u(params, self.n) - lucas_u(params, self.m) == self.repdigit.value
    }
}
