//! Explicit upper bounds from linear forms in logarithms.
//!
//! Two applications of Matveev's lower bound give, for any solution of
//! `a (b^k - 1)/(b - 1) = U_n - U_m`:
//!
//! * `k < 1 + n log δ / log b`,
//! * `(n - m) log δ - log(1 + 3√Δ) < c_nm (1 + log D) log δ log b (2 log b + log Δ)`,
//! * `n log δ - log(8.1 √Δ) < c_r2 (1 + log D) log δ log b ξ`, with
//!   `ξ = log(4 b² Δ (1 + 3√Δ)) + c_ξ (1 + log D) log δ log b (2 log b + log Δ)`,
//!
//! where `D` bounds the exponents. Substituting `D <= C₂ n` collapses the last
//! line to `n < C₁ (1 + log(C₂ n))²`, which the Gúzman–Sánchez–Luca lemma
//! turns into an explicit bound.
//!
//! [`Mode::Paper`] uses the published rounded constants (`2·10¹²`) and rounds
//! intermediate constants upward to the published significant figures;
//! [`Mode::Rigorous`] evaluates Matveev's constant exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{elementary, format_rational, Ball, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::lucas::SequenceParams;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Paper,
    Rigorous,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Rigorous => "rigorous",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "rigorous" => Ok(Mode::Rigorous),
            other => Err(Error::Param(format!("unknown mode {other:?}"))),
        }
    }
}

/// `h(δ) = ½ log δ` (δ is a unit whose conjugate lies inside the unit circle).
pub fn log_height_of_delta(params: &SequenceParams, prec: u32) -> Result<Ball> {
    params.require_pipeline()?;
    Ok(params.log_delta(prec)?.mul_2exp(-1))
}

/// `h(p/q) = log max(|p|, q)` for a reduced fraction with `q > 0`.
pub fn log_height_rational(p: &BigInt, q: &BigInt, prec: u32) -> Result<Ball> {
    if !q.is_positive() {
        return Err(Error::Param("denominator must be positive".into()));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::Param(format!("{p}/{q} is not in lowest terms")));
    }
    let m = p.abs().max(q.clone());
    elementary::log_int(&m, prec)
}

/// Data for one application of Matveev's theorem.
#[derive(Clone, Debug)]
pub struct MatveevInstance {
    pub num_logs: u32,
    pub field_degree: u32,
    /// `A_i >= max(d_L h(η_i), |log η_i|, 0.16)`.
    pub heights: Vec<Ball>,
    /// `B >= max |b_i|`.
    pub exponent_bound: Ball,
}

/// `1.4 · 30^(s+3) · s^4.5 · d² · (1 + log d)`.
pub fn matveev_constant(num_logs: u32, field_degree: u32, prec: u32) -> Result<Ball> {
    let s = BigInt::from(num_logs);
    let d = BigInt::from(field_degree);
    let mut c = Ball::from_ratio(14, 10, prec)
        .mul_int(&num_traits::pow(BigInt::from(30), (num_logs + 3) as usize))
        .mul_int(&num_traits::pow(s.clone(), 4))
        .mul_int(&(&d * &d));
    c = &c * &elementary::sqrt_int(&s, prec)?;
    let one = Ball::one(prec);
    c = &c * &(&one + &elementary::log_int(&d, prec)?);
    Ok(c)
}

/// Right-hand side of Matveev's inequality: `log |Λ| > result`.
pub fn matveev_lower_bound(inst: &MatveevInstance) -> Result<Ball> {
    if inst.heights.len() != inst.num_logs as usize || inst.num_logs == 0 {
        return Err(Error::Param("need one height per logarithm".into()));
    }
    let prec = inst.exponent_bound.prec();
    let floor = Ball::from_ratio(16, 100, prec);
    for (i, a) in inst.heights.iter().enumerate() {
        if a.cmp_ball(&floor) == Some(std::cmp::Ordering::Less) {
            return Err(Error::Hypothesis(format!("A_{} must be at least 0.16", i + 1)));
        }
    }
    if inst.exponent_bound.cmp_ball(&Ball::one(prec)) == Some(std::cmp::Ordering::Less) {
        return Err(Error::Hypothesis("B must be at least 1".into()));
    }
    let mut v = matveev_constant(inst.num_logs, inst.field_degree, prec)?;
    v = &v * &(&Ball::one(prec) + &elementary::log(&inst.exponent_bound)?);
    for a in &inst.heights {
        v = &v * a;
    }
    Ok(-v)
}

/// `1 + n log δ / log b`: every admissible `k` lies strictly below it.
pub fn k_bound(params: &SequenceParams, b: u64, n: &BigInt, prec: u32) -> Result<Ball> {
    check_base(b)?;
    let ratio = params
        .log_delta(prec)?
        .checked_div(&elementary::log_int(&BigInt::from(b), prec)?)?;
    Ok(&Ball::one(prec) + &ratio.mul_int(n))
}

fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        Err(Error::Param(format!("base must be >= 2, got {b}")))
    } else {
        Ok(())
    }
}

/// Coefficients multiplying `(1 + log D) log δ log b (...)` in each inequality.
struct ChainConstants {
    nm: Ball,
    xi: Ball,
    r2: Ball,
}

impl ChainConstants {
    fn new(mode: Mode, prec: u32) -> Result<Self> {
        Ok(match mode {
            Mode::Paper => {
                let two_e12 = Ball::from_int(&(BigInt::from(2) * num_traits::pow(BigInt::from(10), 12)), prec);
                ChainConstants {
                    nm: two_e12.mul_2exp(1),
                    xi: two_e12.clone(),
                    r2: two_e12,
                }
            }
            Mode::Rigorous => {
                // A₂ = 2 log b puts a factor 2 on Matveev's constant.
                let two_k = matveev_constant(3, 2, prec)?.mul_2exp(1);
                ChainConstants {
                    nm: two_k.clone(),
                    xi: two_k.clone(),
                    r2: two_k,
                }
            }
        })
    }
}

/// Logs shared by every formula.
struct Logs {
    log_delta: Ball,
    log_b: Ball,
    log_disc: Ball,
    sqrt_disc: Ball,
}

impl Logs {
    fn new(params: &SequenceParams, b: u64, prec: u32) -> Result<Self> {
        params.require_pipeline()?;
        check_base(b)?;
        Ok(Logs {
            log_delta: params.log_delta(prec)?,
            log_b: elementary::log_int(&BigInt::from(b), prec)?,
            log_disc: elementary::log_int(&params.discriminant(), prec)?,
            sqrt_disc: params.sqrt_discriminant(prec)?,
        })
    }

    /// `log b (2 log b + log Δ)`.
    fn q(&self) -> Ball {
        &self.log_b * &(self.log_b.mul_2exp(1) + &self.log_disc)
    }

    /// `log(1 + 3√Δ)`.
    fn log_one_plus_3sqrt(&self) -> Result<Ball> {
        let prec = self.log_b.prec();
        elementary::log(&(&Ball::one(prec) + &self.sqrt_disc.mul_int(&BigInt::from(3))))
    }
}

/// Rounds `x` upward to `digits` significant decimal digits.
pub fn round_up_sig(x: &Ball, digits: u32) -> Ball {
    let hi = x.hi();
    let prec = x.prec();
    if !hi.is_positive() {
        return Ball::from_rational(&hi, prec);
    }
    let ten = BigInt::from(10);
    let mut e10 = (hi.numer().bits() as i64 - hi.denom().bits() as i64) * 30103 / 100000;
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while pow(e10) > hi {
        e10 -= 1;
    }
    while pow(e10 + 1) <= hi {
        e10 += 1;
    }
    let unit = pow(e10 - digits as i64 + 1);
    let rounded = (&hi / &unit).ceil() * unit;
    Ball::from_rational(&rounded, prec)
}

/// Certified integer bound on `n - m` from the first Matveev application.
pub fn nm_bound(params: &SequenceParams, b: u64, d: &Ball, mode: Mode, prec: u32) -> Result<BigInt> {
    let logs = Logs::new(params, b, prec)?;
    let consts = ChainConstants::new(mode, prec)?;
    nm_bound_with(&logs, &consts, d)
}

fn nm_bound_with(logs: &Logs, consts: &ChainConstants, d: &Ball) -> Result<BigInt> {
    let prec = logs.log_b.prec();
    if d.cmp_ball(&Ball::one(prec)) == Some(std::cmp::Ordering::Less) {
        return Err(Error::Param("D must be at least 1".into()));
    }
    let one_plus_log_d = &Ball::one(prec) + &elementary::log(d)?;
    // (n-m) < log(1+3√Δ)/log δ + c_nm (1 + log D) log b (2 log b + log Δ)
    let rhs = logs.log_one_plus_3sqrt()?.checked_div(&logs.log_delta)?
        + &consts.nm * &one_plus_log_d * logs.q();
    Ok(rhs.ceil_upper() - 1)
}

/// Coefficients of the implicit bound `n < C₁ (1 + log(C₂ n))²`.
#[derive(Clone, Debug)]
pub struct ImplicitBound {
    pub c1: Ball,
    pub c2: Ball,
}

impl ImplicitBound {
    /// `C₁ (1 + log(C₂ n))²` at `n`.
    pub fn rhs(&self, n: &Ball) -> Result<Ball> {
        let prec = n.prec().max(self.c1.prec());
        let t = &Ball::one(prec) + &elementary::log(&(&self.c2 * n))?;
        Ok(&self.c1 * &t.sqr())
    }

    /// Largest fixed point of `n ↦ C₁ (1 + log(C₂ n))²`, iterated from 2 in f64.
    pub fn fixed_point(&self) -> f64 {
        let c1 = self.c1.to_f64();
        let c2 = self.c2.to_f64();
        let mut n = 2.0f64;
        for _ in 0..10_000 {
            let next = c1 * (1.0 + (c2 * n).ln()).powi(2);
            if (next - n).abs() <= 1e-13 * n {
                return next;
            }
            n = next;
        }
        n
    }
}

fn c2_for(mode: Mode, logs: &Logs) -> Result<Ball> {
    let prec = logs.log_b.prec();
    let c = logs.log_delta.checked_div(&logs.log_b)?;
    Ok(match mode {
        // D = 1 + n c < (1 + c) n, rounded up to an integer
        Mode::Paper => Ball::from_int(&(&Ball::one(prec) + &c).ceil_upper(), prec),
        // max(n, 1 + n c) <= max(1, c + 1/2) n for n >= 2
        Mode::Rigorous => {
            let half = c + Ball::from_ratio(1, 2, prec);
            if half.cmp_ball(&Ball::one(prec)) == Some(std::cmp::Ordering::Greater) {
                half
            } else {
                Ball::one(prec)
            }
        }
    })
}

fn implicit_with(logs: &Logs, consts: &ChainConstants, params: &SequenceParams, b: u64, mode: Mode) -> Result<ImplicitBound> {
    let prec = logs.log_b.prec();
    let c2 = c2_for(mode, logs)?;
    // log(4 b² Δ (1 + 3√Δ))
    let bb = BigInt::from(b);
    let four_b2_disc = Ball::from_int(&(BigInt::from(4) * &bb * &bb * params.discriminant()), prec);
    let l4 = elementary::log(&four_b2_disc)? + logs.log_one_plus_3sqrt()?;
    // ξ <= (L4 + c_ξ log δ Q) X with X = 1 + log(C₂ n) >= 1
    let mut xi_coef = l4 + &consts.xi * &logs.log_delta * logs.q();
    if mode == Mode::Paper {
        xi_coef = round_up_sig(&xi_coef, 1);
    }
    // n < log(8.1√Δ)/log δ + c_r2 log b ξ_coef X²
    let log_81_sqrt = elementary::log(&(&Ball::from_ratio(81, 10, prec) * &logs.sqrt_disc))?;
    let mut c1 = log_81_sqrt.checked_div(&logs.log_delta)? + &consts.r2 * &logs.log_b * &xi_coef;
    if mode == Mode::Paper {
        c1 = round_up_sig(&c1, 2);
    }
    Ok(ImplicitBound { c1, c2 })
}

/// Coefficients `(C₁, C₂)` of `n < C₁ (1 + log(C₂ n))²`.
pub fn n_bound_implicit(params: &SequenceParams, b: u64, mode: Mode, prec: u32) -> Result<ImplicitBound> {
    let logs = Logs::new(params, b, prec)?;
    let consts = ChainConstants::new(mode, prec)?;
    implicit_with(&logs, &consts, params, b, mode)
}

/// Gúzman–Sánchez–Luca: if `H > (4r²)^r` and `L/(log L)^r < H` then
/// `L < 2^r H (log H)^r`. Returns that bound, ceiled.
pub fn gsl_resolve(r_exp: u32, h: &Ball) -> Result<BigInt> {
    if r_exp == 0 {
        return Err(Error::Param("exponent r must be >= 1".into()));
    }
    let threshold = num_traits::pow(BigInt::from(4 * r_exp * r_exp), r_exp as usize);
    if h.cmp_int(&threshold) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Hypothesis(format!("H must exceed (4r^2)^r = {threshold}")));
    }
    let lh = elementary::log(h)?;
    let v = h.mul_2exp(r_exp as i64) * lh.pow_u(r_exp as u64);
    Ok(v.ceil_upper())
}

/// Every explicit bound produced before the reduction step.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub mode: Mode,
    pub implicit: ImplicitBound,
    /// `H` with `n < H log² n`.
    pub h: Ball,
    /// `n < C₁ (1 + log(C₂ n))²` with numbers filled in.
    pub n_bound_raw: String,
    pub n_bound_explicit: BigInt,
    /// `1 + n log δ / log b` at the explicit n bound.
    pub k_bound: Ball,
    /// Bound on the Matveev exponent height `max(|b_i|)` used for `n - m`.
    pub d_expression: Ball,
    pub nm_bound: BigInt,
    /// Cap `M` on `k` used by the reduction.
    pub k_cap: BigInt,
    pub fixed_point: f64,
    pub gsl_fixed_point_ratio: f64,
    pub precision_bits: u32,
}

impl BoundReport {
    pub fn cross_check_within_10x(&self) -> bool {
        self.gsl_fixed_point_ratio <= 10.0
    }
}

fn explicit_at(params: &SequenceParams, b: u64, mode: Mode, prec: u32) -> Result<BoundReport> {
    let logs = Logs::new(params, b, prec)?;
    let consts = ChainConstants::new(mode, prec)?;
    let implicit = implicit_with(&logs, &consts, params, b, mode)?;

    // n >= 2: 1 + log C₂ + log n <= ((1 + log C₂ + log 2)/log 2) log n
    let ln2 = elementary::ln2(prec);
    let one = Ball::one(prec);
    let ratio = (&one + &elementary::log(&implicit.c2)? + &ln2).checked_div(&ln2)?;
    let mut h = &implicit.c1 * &ratio.sqr();
    if mode == Mode::Paper {
        h = round_up_sig(&h, 2);
    }
    let mut n_bound = gsl_resolve(2, &h)?;
    if mode == Mode::Paper {
        n_bound = round_up_sig(&Ball::from_int(&n_bound, prec), 2).ceil_upper();
    }

    // The implicit inequality must fail at the explicit bound.
    let n_ball = Ball::from_int(&n_bound, prec);
    if implicit.rhs(&n_ball)?.cmp_ball(&n_ball) != Some(std::cmp::Ordering::Less) {
        return Err(Error::undecided("explicit n bound does not certify", prec));
    }

    let fixed_point = implicit.fixed_point();
    let n_f64 = n_bound.to_f64().unwrap_or(f64::INFINITY);
    if fixed_point > n_f64 * (1.0 + 1e-9) {
        return Err(Error::Hypothesis(format!(
            "fixed point {fixed_point:e} exceeds the GSL bound {n_f64:e}"
        )));
    }

    let k = k_bound(params, b, &n_bound, prec)?;
    let (d, k_cap) = match mode {
        Mode::Paper => {
            let c2 = implicit.c2.ceil_upper();
            let cap = &c2 * &n_bound;
            (Ball::from_int(&cap, prec), cap)
        }
        Mode::Rigorous => {
            let d = if k.cmp_ball(&n_ball) == Some(std::cmp::Ordering::Greater) {
                k.clone()
            } else {
                n_ball.clone()
            };
            (d, k.ceil_upper())
        }
    };
    let nm = nm_bound_with(&logs, &consts, &d)?;
    let n_bound_raw = format!(
        "n < {} (1 + log({} n))^2",
        format_rational(&implicit.c1.hi(), 6),
        format_rational(&implicit.c2.hi(), 6)
    );
    Ok(BoundReport {
        mode,
        h,
        n_bound_raw,
        gsl_fixed_point_ratio: n_f64 / fixed_point,
        fixed_point,
        implicit,
        n_bound_explicit: n_bound,
        k_bound: k,
        d_expression: d,
        nm_bound: nm,
        k_cap,
        precision_bits: prec,
    })
}

/// Full chain: implicit inequality, GSL resolution, `k` and `n - m` bounds.
pub fn n_bound_explicit(
    params: &SequenceParams,
    b: u64,
    mode: Mode,
    policy: &PrecisionPolicy,
) -> Result<BoundReport> {
    params.require_pipeline()?;
    check_base(b)?;
    policy.run(|prec| explicit_at(params, b, mode, prec))
}
