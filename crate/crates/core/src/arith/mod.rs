//! Rigorous arbitrary-precision arithmetic: balls, elementary functions,
//! nearest-integer distance and continued fractions.

mod ball;
pub mod cf;
pub mod elementary;
mod mag;

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

pub use ball::{format_rational, Ball};
pub use cf::{cf_expand, ContinuedFraction};
pub use elementary::{exp, ln2, log, log_int, sqrt, sqrt_int};
pub use mag::Mag;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 2048;

/// Adaptive precision: start at `start_bits`, double up to `doublings` times
/// while a decision stays undecided, then give up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub doublings: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: DEFAULT_PRECISION,
            doublings: 4,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_start(start_bits: u32) -> Self {
        PrecisionPolicy {
            start_bits,
            ..Default::default()
        }
    }

    pub fn max_bits(&self) -> u32 {
        self.start_bits << self.doublings
    }

    /// Runs `f` at increasing precision until it stops reporting an
    /// undecided comparison.
    pub fn run<T>(&self, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
        let mut prec = self.start_bits;
        for attempt in 0..=self.doublings {
            match f(prec) {
                Err(e) if e.is_undecided() => {
                    if attempt == self.doublings {
                        return Err(exhausted(e));
                    }
                    prec *= 2;
                }
                other => return other,
            }
        }
        unreachable!()
    }
}

fn exhausted(e: Error) -> Error {
    match e {
        Error::Stage { stage, source } => Error::Stage {
            stage,
            source: Box::new(exhausted(*source)),
        },
        Error::Undecided { what, prec } => Error::PrecisionExhausted { what, prec },
        other => other,
    }
}

fn dist_to_nearest(t: &BigRational) -> BigRational {
    (t - t.round()).abs()
}

/// Enclosure of `||x||`, the distance from `x` to the nearest integer.
///
/// `||.||` is 1-Lipschitz, so the result is the exact range of the function
/// over the enclosure of `x`. Enclosures of width 1/4 or more are undecided.
pub fn nearest_int_distance(x: &Ball) -> Result<Ball> {
    let lo = x.lo();
    let hi = x.hi();
    let quarter = BigRational::new(1.into(), 4.into());
    if &hi - &lo >= quarter {
        return Err(Error::undecided(
            "enclosure too wide for nearest-integer distance",
            x.prec(),
        ));
    }
    let half = BigRational::new(1.into(), 2.into());
    let d_lo = dist_to_nearest(&lo);
    let d_hi = dist_to_nearest(&hi);
    let contains_integer = lo.ceil() <= hi;
    let shifted_lo = &lo - &half;
    let shifted_hi = &hi - &half;
    let contains_half = shifted_lo.ceil() <= shifted_hi;
    let (min, max) = match d_lo.cmp(&d_hi) {
        Ordering::Less => (d_lo.clone(), d_hi.clone()),
        _ => (d_hi.clone(), d_lo.clone()),
    };
    let min = if contains_integer {
        BigRational::from_integer(0.into())
    } else {
        min
    };
    let max = if contains_half { half } else { max };
    Ok(Ball::from_interval(&min, &max, x.prec()))
}
