//! Square root, exponential and logarithm on balls.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ball::Ball;
use super::mag::Mag;
use crate::error::{Error, Result};

/// Guard bits carried by series evaluations above the target precision.
const GUARD: u32 = 64;

/// Lower bound on `sqrt(m)`.
fn mag_sqrt_down(m: Mag) -> Mag {
    if m.is_zero() {
        return m;
    }
    let (man, exp) = m.to_parts();
    let mut man = man;
    let mut exp = exp;
    // widen the mantissa so the integer root keeps ~60 bits
    man <<= 64u32;
    exp -= 64;
    if exp.rem_euclid(2) == 1 {
        man <<= 1u32;
        exp -= 1;
    }
    let r = man.sqrt();
    Mag::from_big_down(&r, exp / 2)
}

/// `2 * atanh(z)` by its odd power series; requires `|z| <= 1/3`.
fn two_atanh(z: &Ball, wp: u32) -> Ball {
    let z = z.with_prec(wp);
    let z2 = z.sqr();
    let mut power = z.clone();
    let mut sum = Ball::zero(wp);
    let target = Mag::pow2(-(wp as i64) - 8);
    let mut i: u64 = 0;
    loop {
        let term = power.div_u64(2 * i + 1);
        sum = &sum + &term;
        power = &power * &z2;
        i += 1;
        let p_up = power.mag_upper();
        if p_up < target {
            // remainder <= |z|^(2i+1) / (1 - z^2) <= 2 |z|^(2i+1)
            sum = sum.add_rad(p_up.mul_up(Mag::from_u64(2)));
            break;
        }
    }
    sum.mul_2exp(1)
}

/// `log 2` to `prec` bits.
pub fn ln2(prec: u32) -> Ball {
    let wp = prec + GUARD;
    let third = Ball::from_ratio(1, 3, wp);
    two_atanh(&third, wp).with_prec(prec)
}

/// Natural logarithm. The enclosure must lie strictly inside `(0, inf)`.
pub fn log(x: &Ball) -> Result<Ball> {
    let prec = x.prec();
    if x.is_negative() || x.sign() == Some(std::cmp::Ordering::Equal) {
        return Err(Error::Domain("logarithm of a non-positive number".into()));
    }
    let lower = x.mag_lower();
    if lower.is_zero() || !x.is_positive() {
        return Err(Error::undecided("logarithm argument touches zero", prec));
    }
    let wp = prec + GUARD;
    let mid = x.mid_rational();
    let man = mid.numer().clone();
    let den = mid.denom().clone();
    // mid = man / den with den a power of two
    let den_bits = den.bits() as i64 - 1;
    let b = man.bits() as i64;
    // f = man / 2^(b-1) in [1, 2), mid = f * 2^e
    let mut e = b - 1 - den_bits;
    let mut fexp = -(b - 1);
    if &man * BigInt::from(3) > BigInt::from(4) << (b - 1) as u64 {
        e += 1;
        fexp -= 1;
    }
    let f = Ball::from_dyadic(man, fexp, wp);
    let one = Ball::one(wp);
    let z = (&f - &one).checked_div(&(&f + &one))?;
    let mut result = two_atanh(&z, wp);
    if e != 0 {
        result = &result + &ln2(wp).mul_int(&BigInt::from(e));
    }
    // |log x - log mid| <= rad / (mid - rad)
    if !x.rad().is_zero() {
        result = result.add_rad(x.rad().div_up(lower));
    }
    Ok(result.with_prec(prec))
}

/// Exponential function.
pub fn exp(x: &Ball) -> Result<Ball> {
    let prec = x.prec();
    let r = x.rad();
    if r > Mag::pow2(-1) {
        return Err(Error::undecided("exponential of a wide ball", prec));
    }
    let mid = x.mid_rational();
    if mid.is_zero() {
        let one = Ball::one(prec);
        return Ok(if r.is_zero() {
            one
        } else {
            one.add_rad(r.mul_up(Mag::from_u64(4)))
        });
    }
    let man = mid.numer().clone();
    let den_bits = mid.denom().bits() as i64 - 1;
    let top = man.bits() as i64 - den_bits;
    let s = (top + 24).max(0) as u64;
    let wp = prec + GUARD + s as u32;
    let t = Ball::from_dyadic(man, -den_bits - s as i64, wp);
    let target = Mag::pow2(-(wp as i64) - 8);
    let mut sum = Ball::one(wp);
    let mut term = Ball::one(wp);
    let mut i: u64 = 1;
    loop {
        term = (&term * &t).div_u64(i);
        sum = &sum + &term;
        let up = term.mag_upper();
        if up < target {
            sum = sum.add_rad(up.mul_up(Mag::from_u64(2)));
            break;
        }
        i += 1;
    }
    for _ in 0..s {
        sum = sum.sqr();
    }
    if !r.is_zero() {
        // e^(m +/- r) within e^m * (1 +/- 2r) for r <= 1/2
        let spread = sum.mag_upper().mul_up(r.mul_up(Mag::from_u64(2)));
        sum = sum.add_rad(spread);
    }
    Ok(sum.with_prec(prec))
}

/// Square root. The enclosure must lie strictly inside `(0, inf)` unless exactly zero.
pub fn sqrt(x: &Ball) -> Result<Ball> {
    let prec = x.prec();
    if x.sign() == Some(std::cmp::Ordering::Equal) {
        return Ok(Ball::zero(prec));
    }
    if x.is_negative() {
        return Err(Error::Domain("square root of a negative number".into()));
    }
    let lower = x.mag_lower();
    if lower.is_zero() {
        return Err(Error::undecided("square root argument touches zero", prec));
    }
    let mid = x.mid_rational();
    let man = mid.numer().clone();
    let mut exp = -(mid.denom().bits() as i64 - 1);
    let want = 2 * (prec as i64 + 8);
    let mut s = (want - man.bits() as i64).max(0);
    if (exp - s).rem_euclid(2) == 1 {
        s += 1;
    }
    let scaled: BigInt = &man << s as u64;
    exp -= s;
    let root = scaled.sqrt();
    let rexp = exp / 2;
    let mut err = Mag::pow2(rexp);
    if !x.rad().is_zero() {
        // |sqrt(x) - sqrt(mid)| <= rad / sqrt(mid - rad)
        err = err.add_up(x.rad().div_up(mag_sqrt_down(lower)));
    }
    let exact = root.clone() * &root == scaled && x.rad().is_zero();
    let b = Ball::from_dyadic(root, rexp, prec + 8);
    let b = if exact { b } else { b.add_rad(err) };
    Ok(b.with_prec(prec))
}

/// `sqrt(n)` of an integer.
pub fn sqrt_int(n: &BigInt, prec: u32) -> Result<Ball> {
    sqrt(&Ball::from_int(n, prec))
}

/// `log(n)` of a positive integer.
pub fn log_int(n: &BigInt, prec: u32) -> Result<Ball> {
    if n <= &BigInt::zero() {
        return Err(Error::Domain("logarithm of a non-positive integer".into()));
    }
    if n.is_one() {
        return Ok(Ball::zero(prec));
    }
    log(&Ball::from_int(n, prec))
}
