//! Certified continued-fraction expansion.
//!
//! Expansion runs on an exact rational interval `[lo, hi]` known to contain
//! the target. A partial quotient is emitted only when every point of the
//! current tail interval has the same floor, so the prefix returned is the
//! true prefix of every real in the interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ball::Ball;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<BigInt>,
    /// `(p_i, q_i)` for each emitted partial quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// The input was an exact rational and the expansion ended.
    pub terminated: bool,
}

impl ContinuedFraction {
    fn from_quotients(partial_quotients: Vec<BigInt>, terminated: bool) -> Self {
        let mut convergents = Vec::with_capacity(partial_quotients.len());
        let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
        let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
        for a in &partial_quotients {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            convergents.push((p.clone(), q.clone()));
        }
        ContinuedFraction {
            partial_quotients,
            convergents,
            terminated,
        }
    }

    /// Expansion common to every real in `[lo, hi]`, at most `max_terms` long.
    pub fn of_interval(lo: &BigRational, hi: &BigRational, max_terms: usize) -> Self {
        let (mut lo, mut hi) = if lo <= hi {
            (lo.clone(), hi.clone())
        } else {
            (hi.clone(), lo.clone())
        };
        let mut quotients = Vec::new();
        let mut terminated = false;
        while quotients.len() < max_terms {
            let a = lo.floor();
            if hi.floor() != a {
                break;
            }
            if lo == a {
                if hi == a {
                    quotients.push(a.to_integer());
                    terminated = true;
                }
                // otherwise the tail may be exactly the integer a
                break;
            }
            quotients.push(a.to_integer());
            let next_lo = (&hi - &a).recip();
            let next_hi = (&lo - &a).recip();
            lo = next_lo;
            hi = next_hi;
        }
        ContinuedFraction::from_quotients(quotients, terminated)
    }

    /// Euclidean expansion of an exact rational.
    pub fn of_rational(x: &BigRational, max_terms: usize) -> Self {
        ContinuedFraction::of_interval(x, x, max_terms)
    }

    /// Certified prefix of the expansion of every real in the ball.
    pub fn of_ball(x: &Ball, max_terms: usize) -> Self {
        ContinuedFraction::of_interval(&x.lo(), &x.hi(), max_terms)
    }

    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn denominators(&self) -> impl Iterator<Item = &BigInt> {
        self.convergents.iter().map(|(_, q)| q)
    }
}

/// First `count` certified partial quotients of `x`.
///
/// Fails with an undecided error when the enclosure is too wide to certify
/// `count` terms; callers retry at higher precision. An exact rational input
/// whose expansion ends early returns the complete (shorter) expansion.
pub fn cf_expand(x: &Ball, count: usize) -> Result<ContinuedFraction> {
    if count == 0 {
        return Err(Error::Param("continued fraction term count must be >= 1".into()));
    }
    let cf = ContinuedFraction::of_ball(x, count);
    if cf.len() < count && !cf.terminated {
        return Err(Error::undecided(
            format!("only {} of {count} partial quotients certified", cf.len()),
            x.prec(),
        ));
    }
    Ok(cf)
}
