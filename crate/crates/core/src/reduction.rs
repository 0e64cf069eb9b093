//! Baker–Davenport reduction.
//!
//! For `|u τ - v + μ| < A B^(-ω)` with `0 <= u <= M`, take a convergent `p/q`
//! of `τ` with `q > 6M` and `ε = ||μ q|| - M ||τ q|| > 0`. Multiplying by `q`
//! gives `ε <= q A B^(-ω)`, so `ω < log(A q / ε) / log B`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{cf::ContinuedFraction, elementary, nearest_int_distance, Ball};
use crate::bounds::{round_up_sig, Mode};
use crate::error::{Error, Result};
use crate::lucas::SequenceParams;

/// Convergents examined before giving up on an instance.
pub const MAX_CONVERGENTS: usize = 200;

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub label: String,
    pub tau: Ball,
    pub mu: Ball,
    pub a: Ball,
    pub b: Ball,
    pub m: BigInt,
    /// Exact value of `τ` when it is rational; its expansion then terminates.
    pub tau_exact: Option<BigRational>,
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub label: String,
    /// 0-based index of the convergent used.
    pub convergent_index: usize,
    pub q: BigInt,
    pub epsilon: Ball,
    /// Every solution has `ω <= bound`.
    pub bound: u64,
    /// `Some(d)` when `μ - d τ` is numerically an integer and the bound
    /// came from the homogeneous fallback.
    pub shift: Option<i64>,
}

impl ReductionInstance {
    fn check(&self) -> Result<()> {
        let prec = self.tau.prec();
        if !self.a.is_positive() {
            return Err(Error::Param(format!("{}: A must be positive", self.label)));
        }
        if self.b.cmp_ball(&Ball::one(prec)) != Some(Ordering::Greater) {
            return Err(Error::Param(format!("{}: B must exceed 1", self.label)));
        }
        if self.m < BigInt::from(1) {
            return Err(Error::Param(format!("{}: M must be >= 1", self.label)));
        }
        if let Some(t) = &self.tau_exact {
            if !self.tau.contains_rational(t) {
                return Err(Error::Param(format!("{}: tau enclosure misses its exact value", self.label)));
            }
        }
        Ok(())
    }

    /// `ε` at `q` if certified positive, `None` if certified non-positive.
    fn epsilon(&self, q: &BigInt) -> Result<Option<Ball>> {
        let d_mu = nearest_int_distance(&self.mu.mul_int(q))?;
        let d_tau = nearest_int_distance(&self.tau.mul_int(q))?;
        let eps = d_mu - d_tau.mul_int(&self.m);
        match eps.sign() {
            Some(Ordering::Greater) => Ok(Some(eps)),
            Some(_) => Ok(None),
            None => Err(Error::undecided(format!("sign of epsilon for {}", self.label), eps.prec())),
        }
    }

    /// `max(0, ceil(log(x)/log B) - 1)`: the largest `ω` with `x > B^ω` may hold.
    fn omega_bound(&self, x: &Ball) -> Result<u64> {
        let w = elementary::log(x)?.checked_div(&elementary::log(&self.b)?)?;
        let bound = (w.ceil_upper() - BigInt::from(1)).max(BigInt::from(0));
        bound.to_u64().ok_or_else(|| Error::ReductionFailed {
            label: self.label.clone(),
            reason: "bound does not fit in 64 bits".into(),
        })
    }

    fn finish(&self, index: usize, q: &BigInt, eps: Ball) -> Result<ReductionOutcome> {
        let bound = self.omega_bound(&self.a.mul_int(q).checked_div(&eps)?)?;
        Ok(ReductionOutcome {
            label: self.label.clone(),
            convergent_index: index,
            q: q.clone(),
            epsilon: eps,
            bound,
            shift: None,
        })
    }
}

/// Reduces one instance, expanding `τ` itself.
pub fn reduce_instance(inst: &ReductionInstance) -> Result<ReductionOutcome> {
    reduce_with(inst, &expansion(inst))
}

fn expansion(inst: &ReductionInstance) -> ContinuedFraction {
    match &inst.tau_exact {
        Some(t) => ContinuedFraction::of_rational(t, MAX_CONVERGENTS),
        None => ContinuedFraction::of_ball(&inst.tau, MAX_CONVERGENTS),
    }
}

fn reduce_with(inst: &ReductionInstance, cf: &ContinuedFraction) -> Result<ReductionOutcome> {
    inst.check()?;
    let six_m = &inst.m * 6;
    for (i, (_, q)) in cf.convergents.iter().enumerate() {
        if q <= &six_m {
            continue;
        }
        if let Some(eps) = inst.epsilon(q)? {
            return inst.finish(i, q, eps);
        }
    }
    if cf.terminated {
        // τ is rational: any multiple of its denominator has ||τ q|| = 0.
        let last = cf.len() - 1;
        let q_last = &cf.convergents[last].1;
        let mut t = &six_m / q_last + 1;
        for _ in 0..MAX_CONVERGENTS {
            let q = &t * q_last;
            if let Some(eps) = inst.epsilon(&q)? {
                return inst.finish(last, &q, eps);
            }
            t += 1;
        }
    } else if cf.len() < MAX_CONVERGENTS {
        return Err(Error::undecided(
            format!("only {} convergents of tau certified", cf.len()),
            inst.tau.prec(),
        ));
    }
    if let Some(out) = degenerate(inst, cf)? {
        return Ok(out);
    }
    Err(Error::ReductionFailed {
        label: inst.label.clone(),
        reason: format!("no convergent among the first {MAX_CONVERGENTS} gives epsilon > 0"),
    })
}

/// Largest `|d|` tried by the degenerate fallback.
pub const MAX_SHIFT: i64 = 32;

/// Fallback for `μ = c + d τ` with integers `c`, `d`, where `ε = -M ||τ q||`
/// at every convergent. Algebraic identities of the sequence produce such
/// instances (e.g. `φ⁴ - 1 = √5 φ²`).
///
/// Assumes `u >= 1` and `0 <= ω <= v`, which hold for both families. With
/// `u' = u + d` and `|μ - d τ - c| <= ρ`:
/// * `u' != 0`: for `0 < |u'| < q_N`, `||u' τ|| >= ||q_(N-1) τ||`, so
///   `||q_(N-1) τ|| - ρ < A B^(-ω)`;
/// * `u' = 0`: either `v = c`, hence `ω <= c`, or `1 - ρ < A B^(-ω)`.
fn degenerate(inst: &ReductionInstance, cf: &ContinuedFraction) -> Result<Option<ReductionOutcome>> {
    let prec = inst.mu.prec();
    let tiny = Ball::one(prec).mul_2exp(-(prec as i64) / 2);
    let mut found = None;
    'search: for step in 0..=2 * MAX_SHIFT {
        let d = if step % 2 == 0 { -(step / 2) } else { step / 2 + 1 };
        let shifted = &inst.mu - &inst.tau.mul_int(&BigInt::from(d));
        let c = shifted.mid_rational().round();
        let rho = (&shifted - &Ball::from_rational(&c, prec)).abs();
        if rho.cmp_ball(&tiny) == Some(Ordering::Less) {
            found = Some((d, c.to_integer(), rho));
            break 'search;
        }
    }
    let Some((d, c, rho)) = found else {
        return Ok(None);
    };
    let u_max = &inst.m + BigInt::from(d.abs());
    let Some(n) = cf.convergents.iter().position(|(_, q)| q > &u_max) else {
        return Ok(None);
    };
    // the best-approximation property needs q_(N-1) past the first term
    if n < 2 {
        return Ok(None);
    }
    let prev = &cf.convergents[n - 1].1;
    let eps = nearest_int_distance(&inst.tau.mul_int(prev))? - &rho;
    if eps.sign() != Some(Ordering::Greater) {
        return Ok(None);
    }
    let mut bound = inst.omega_bound(&inst.a.checked_div(&eps)?)?;
    if d < 0 && BigInt::from(-d) <= inst.m {
        let one_minus = &Ball::one(prec) - &rho;
        let zero_case = inst.omega_bound(&inst.a.checked_div(&one_minus)?)?;
        let c = c.to_u64().unwrap_or(if c.is_negative() { 0 } else { u64::MAX });
        bound = bound.max(zero_case).max(c);
    }
    Ok(Some(ReductionOutcome {
        label: inst.label.clone(),
        convergent_index: n,
        q: cf.convergents[n].1.clone(),
        epsilon: eps,
        bound,
        shift: Some(d),
    }))
}

/// Result of reducing a whole family.
#[derive(Clone, Debug)]
pub struct FamilyOutcome {
    /// Maximum per-instance bound.
    pub bound: u64,
    /// The outcome attaining `bound`.
    pub worst: ReductionOutcome,
    /// Smallest ε over instances reduced by the lemma itself.
    pub epsilon_min: Ball,
    pub outcomes: Vec<ReductionOutcome>,
}

/// Reduces every instance and takes the maximum bound.
pub fn reduce_family(instances: &[ReductionInstance]) -> Result<FamilyOutcome> {
    let first = instances
        .first()
        .ok_or_else(|| Error::Param("empty reduction family".into()))?;
    let (lo, hi) = (first.tau.lo(), first.tau.hi());
    let shared = expansion(first);
    let mut outcomes = Vec::with_capacity(instances.len());
    for inst in instances {
        let same = inst.tau_exact == first.tau_exact && inst.tau.lo() == lo && inst.tau.hi() == hi;
        let out = if same {
            reduce_with(inst, &shared)?
        } else {
            reduce_instance(inst)?
        };
        outcomes.push(out);
    }
    // ties go to the earliest instance so the result is order-stable
    let mut worst = 0;
    let mut eps_min: Option<usize> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if o.bound > outcomes[worst].bound {
            worst = i;
        }
        // the fallback's ε measures something else
        if o.shift.is_none() && eps_min.is_none_or(|j| o.epsilon.hi() < outcomes[j].epsilon.hi()) {
            eps_min = Some(i);
        }
    }
    let eps_min = eps_min.unwrap_or(worst);
    Ok(FamilyOutcome {
        bound: outcomes[worst].bound,
        worst: outcomes[worst].clone(),
        epsilon_min: outcomes[eps_min].epsilon.clone(),
        outcomes,
    })
}

struct Common {
    tau: Ball,
    log_delta: Ball,
    delta: Ball,
    sqrt_disc: Ball,
    log_b1: Ball,
}

fn common(params: &SequenceParams, b: u64, prec: u32) -> Result<Common> {
    params.require_pipeline()?;
    if b < 2 {
        return Err(Error::Param(format!("base must be >= 2, got {b}")));
    }
    let log_delta = params.log_delta(prec)?;
    Ok(Common {
        tau: elementary::log_int(&BigInt::from(b), prec)?.checked_div(&log_delta)?,
        log_delta,
        delta: params.delta(prec)?,
        sqrt_disc: params.sqrt_discriminant(prec)?,
        log_b1: elementary::log_int(&BigInt::from(b - 1), prec)?,
    })
}

fn finish_a(a: Ball, mode: Mode) -> Ball {
    match mode {
        Mode::Paper => round_up_sig(&a, 3),
        Mode::Rigorous => a,
    }
}

/// `A = 2 (1 + 3√Δ) / log δ`.
pub fn lambda1_a(params: &SequenceParams, mode: Mode, prec: u32) -> Result<Ball> {
    let s = params.sqrt_discriminant(prec)?;
    let c = (&Ball::one(prec) + &s.mul_int(&BigInt::from(3))).mul_2exp(1);
    Ok(finish_a(c.checked_div(&params.log_delta(prec)?)?, mode))
}

/// `A = 2 · 8.1 √Δ / log δ`.
pub fn lambda2_a(params: &SequenceParams, mode: Mode, prec: u32) -> Result<Ball> {
    let s = params.sqrt_discriminant(prec)?;
    let c = (&Ball::from_ratio(81, 10, prec) * &s).mul_2exp(1);
    Ok(finish_a(c.checked_div(&params.log_delta(prec)?)?, mode))
}

/// One instance per digit: `|k τ - n + μ_a| < A δ^(-(n-m))` with
/// `μ_a = log(a√Δ/(b-1)) / log δ`.
pub fn build_lambda1_family(
    params: &SequenceParams,
    b: u64,
    m: &BigInt,
    mode: Mode,
    prec: u32,
) -> Result<Vec<ReductionInstance>> {
    let c = common(params, b, prec)?;
    let a_const = lambda1_a(params, mode, prec)?;
    let log_sqrt = elementary::log(&c.sqrt_disc)?;
    (1..b)
        .map(|a| {
            let num = &elementary::log_int(&BigInt::from(a), prec)? + &log_sqrt;
            Ok(ReductionInstance {
                label: format!("lambda1[a={a}]"),
                tau: c.tau.clone(),
                mu: (num - &c.log_b1).checked_div(&c.log_delta)?,
                a: a_const.clone(),
                b: c.delta.clone(),
                m: m.clone(),
                tau_exact: None,
            })
        })
        .collect()
}

/// One instance per digit and gap `j = n - m`: `|k τ - n + μ_{a,j}| < A δ^(-n)`
/// with `μ_{a,j} = log(a√Δ/((b-1)(1-δ^(-j)))) / log δ`.
pub fn build_lambda2_family(
    params: &SequenceParams,
    b: u64,
    m: &BigInt,
    nm_max: u64,
    mode: Mode,
    prec: u32,
) -> Result<Vec<ReductionInstance>> {
    if nm_max == 0 {
        return Err(Error::Param("nm_max must be >= 1".into()));
    }
    let c = common(params, b, prec)?;
    let a_const = lambda2_a(params, mode, prec)?;
    let log_sqrt = elementary::log(&c.sqrt_disc)?;
    let one = Ball::one(prec);
    let gap_logs = (1..=nm_max)
        .map(|j| {
            let t = &one - &c.delta.pow_i(-(j as i64))?;
            Ok(&c.log_b1 + &elementary::log(&t)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity((b as usize - 1) * nm_max as usize);
    for a in 1..b {
        let num = &elementary::log_int(&BigInt::from(a), prec)? + &log_sqrt;
        for (j, den) in (1..=nm_max).zip(&gap_logs) {
            out.push(ReductionInstance {
                label: format!("lambda2[a={a},j={j}]"),
                tau: c.tau.clone(),
                mu: (&num - den).checked_div(&c.log_delta)?,
                a: a_const.clone(),
                b: c.delta.clone(),
                m: m.clone(),
                tau_exact: None,
            });
        }
    }
    Ok(out)
}

/// Smallest `g` with `δ^g > 2c`, so `c / δ^ω < 1/2` for every `ω >= g`.
fn guard_for(c: &Ball, log_delta: &Ball) -> Result<u64> {
    let x = elementary::log(&c.mul_2exp(1))?.checked_div(log_delta)?;
    let g: BigInt = x.hi().floor().to_integer() + BigInt::from(1);
    Ok(g.max(BigInt::from(1)).to_u64().unwrap_or(u64::MAX))
}

/// Smallest `n - m` for which `(1 + 3√Δ)/δ^(n-m) < 1/2`.
pub fn lambda1_guard(params: &SequenceParams, prec: u32) -> Result<u64> {
    let s = params.sqrt_discriminant(prec)?;
    let c = &Ball::one(prec) + &s.mul_int(&BigInt::from(3));
    guard_for(&c, &params.log_delta(prec)?)
}

/// Smallest `n` for which `8.1√Δ/δ^n < 1/2`.
pub fn lambda2_guard(params: &SequenceParams, prec: u32) -> Result<u64> {
    let c = &Ball::from_ratio(81, 10, prec) * &params.sqrt_discriminant(prec)?;
    guard_for(&c, &params.log_delta(prec)?)
}
