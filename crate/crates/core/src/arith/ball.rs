//! Ball arithmetic: a dyadic midpoint with a rigorous error radius.
//!
//! A [`Ball`] with midpoint `m` and radius `r` represents every real in
//! `[m - r, m + r]`. Each operation returns a ball containing the exact
//! result for every choice of inputs from the operand balls. Midpoints are
//! kept to `prec` significant bits; rounding error goes into the radius.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Ball {
    man: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

/// Exact value of `man * 2^exp` as a rational.
pub(crate) fn dyadic_to_rational(man: &BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(man << exp as u64)
    } else {
        BigRational::new(man.clone(), BigInt::one() << (-exp) as u64)
    }
}

fn bits(v: &BigInt) -> i64 {
    v.bits() as i64
}

/// `a*2^ea + b*2^eb`, exactly.
fn dyadic_add(a: &BigInt, ea: i64, b: &BigInt, eb: i64) -> (BigInt, i64) {
    let e = ea.min(eb);
    ((a << (ea - e) as u64) + (b << (eb - e) as u64), e)
}

/// Rounds `man * 2^exp` to at most `prec` bits, returning the error bound.
fn round_to(man: BigInt, exp: i64, prec: u32) -> (BigInt, i64, Mag) {
    if man.is_zero() {
        return (man, 0, Mag::ZERO);
    }
    let b = man.bits();
    if b <= prec as u64 {
        return (man, exp, Mag::ZERO);
    }
    let sh = b - prec as u64;
    let exact = man.trailing_zeros().is_some_and(|tz| tz >= sh);
    let m = man >> sh;
    let e = exp + sh as i64;
    (m, e, if exact { Mag::ZERO } else { Mag::pow2(e) })
}

/// Upper bound on a non-negative rational.
fn rational_mag_up(r: &BigRational) -> Mag {
    if r.is_zero() {
        return Mag::ZERO;
    }
    let num = r.numer().abs();
    let den = r.denom();
    let k = 64 + bits(den) - bits(&num);
    let (q, rem) = if k >= 0 {
        (&num << k as u64).div_rem(den)
    } else {
        num.div_rem(&(den << (-k) as u64))
    };
    let q = if rem.is_zero() { q } else { q + 1 };
    Mag::from_big_up(&q, -k)
}

impl Ball {
    fn raw(man: BigInt, exp: i64, rad: Mag, prec: u32) -> Ball {
        let (man, exp, err) = round_to(man, exp, prec);
        Ball {
            man,
            exp,
            rad: rad.add_up(err),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball {
            man: BigInt::zero(),
            exp: 0,
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_int(&BigInt::one(), prec)
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Ball {
        Ball::raw(v.clone(), 0, Mag::ZERO, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        Ball::from_int(&BigInt::from(v), prec)
    }

    /// `man * 2^exp`, exact whenever `man` fits in `prec` bits.
    pub fn from_dyadic(man: BigInt, exp: i64, prec: u32) -> Ball {
        Ball::raw(man, exp, Mag::ZERO, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Ball {
        if r.denom().is_one() {
            return Ball::from_int(r.numer(), prec);
        }
        let num = r.numer();
        let den = r.denom();
        // Dyadic denominators are represented exactly.
        if den.trailing_zeros() == Some(den.bits() - 1) {
            let e = -((den.bits() - 1) as i64);
            return Ball::from_dyadic(num.clone(), e, prec);
        }
        let k = prec as i64 + 8 + bits(den) - bits(num);
        let (q, _) = if k >= 0 {
            (num << k as u64).div_rem(den)
        } else {
            num.div_rem(&(den << (-k) as u64))
        };
        // Truncation error is below one unit in the last place.
        Ball::raw(q, -k, Mag::pow2(-k), prec)
    }

    pub fn from_ratio(p: i64, q: i64, prec: u32) -> Ball {
        Ball::from_rational(&BigRational::new(p.into(), q.into()), prec)
    }

    /// The smallest representable ball containing `[lo, hi]`.
    pub fn from_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Ball {
        let two = BigRational::from_integer(2.into());
        let mid = (lo + hi) / &two;
        let half = (hi - lo).abs() / two;
        let mut b = Ball::from_rational(&mid, prec);
        b.rad = b.rad.add_up(rational_mag_up(&half));
        b
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Same ball carried at a different working precision.
    pub fn with_prec(&self, prec: u32) -> Ball {
        Ball::raw(self.man.clone(), self.exp, self.rad, prec)
    }

    pub fn mid_rational(&self) -> BigRational {
        dyadic_to_rational(&self.man, self.exp)
    }

    fn endpoint(&self, upper: bool) -> (BigInt, i64) {
        let (rm, re) = self.rad.to_parts();
        let rm = if upper { rm } else { -rm };
        if self.man.is_zero() {
            return (rm, re);
        }
        dyadic_add(&self.man, self.exp, &rm, re)
    }

    /// Exact lower endpoint.
    pub fn lo(&self) -> BigRational {
        let (m, e) = self.endpoint(false);
        dyadic_to_rational(&m, e)
    }

    /// Exact upper endpoint.
    pub fn hi(&self) -> BigRational {
        let (m, e) = self.endpoint(true);
        dyadic_to_rational(&m, e)
    }

    /// Upper bound on `max |x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        Mag::from_big_up(&self.man, self.exp).add_up(self.rad)
    }

    /// Lower bound on `min |x|` over the ball; zero if the ball contains 0.
    pub fn mag_lower(&self) -> Mag {
        if self.man.is_zero() {
            return Mag::ZERO;
        }
        let (rm, re) = self.rad.to_parts();
        let (d, e) = dyadic_add(&self.man.abs(), self.exp, &-rm, re);
        if d.sign() != Sign::Plus {
            Mag::ZERO
        } else {
            Mag::from_big_down(&d, e)
        }
    }

    /// Certified sign: `None` when the ball contains zero but is not exactly zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.man.is_zero() {
            return if self.rad.is_zero() {
                Some(Ordering::Equal)
            } else {
                None
            };
        }
        let (m, _) = self.endpoint(false);
        if m.is_positive() {
            return Some(Ordering::Greater);
        }
        let (m, _) = self.endpoint(true);
        if m.is_negative() {
            return Some(Ordering::Less);
        }
        None
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Some(Ordering::Greater)
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Some(Ordering::Less)
    }

    /// Three-valued comparison: `None` means undecidable at this precision.
    pub fn cmp_ball(&self, other: &Ball) -> Option<Ordering> {
        (self - other).sign()
    }

    pub fn cmp_int(&self, v: &BigInt) -> Option<Ordering> {
        let d = self - &Ball::from_int(v, self.prec.max(v.bits() as u32 + 2));
        d.sign()
    }

    pub fn contains_rational(&self, v: &BigRational) -> bool {
        &self.lo() <= v && v <= &self.hi()
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains_rational(&BigRational::from_integer(v.clone()))
    }

    /// True when `other`'s enclosure lies inside this one.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    /// Certified floor: `Some` only if every point of the ball has the same floor.
    pub fn floor(&self) -> Option<BigInt> {
        let lo = self.lo().floor().to_integer();
        let hi = self.hi().floor().to_integer();
        (lo == hi).then_some(lo)
    }

    /// `ceil` of the upper endpoint: an integer no smaller than any point of the ball.
    pub fn ceil_upper(&self) -> BigInt {
        self.hi().ceil().to_integer()
    }

    /// `floor` of the lower endpoint.
    pub fn floor_lower(&self) -> BigInt {
        self.lo().floor().to_integer()
    }

    pub fn abs(&self) -> Ball {
        match self.sign() {
            Some(Ordering::Less) => -self,
            Some(_) => self.clone(),
            None => {
                // [0, max |x|]
                let m = self.mag_upper().mul_2exp(-1);
                let (mm, me) = m.to_parts();
                Ball {
                    man: mm,
                    exp: me,
                    rad: m,
                    prec: self.prec,
                }
            }
        }
    }

    /// Widens the radius by `r`.
    pub fn add_rad(mut self, r: Mag) -> Ball {
        self.rad = self.rad.add_up(r);
        self
    }

    pub fn mul_2exp(&self, e: i64) -> Ball {
        Ball {
            man: self.man.clone(),
            exp: if self.man.is_zero() { 0 } else { self.exp + e },
            rad: self.rad.mul_2exp(e),
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, v: &BigInt) -> Ball {
        let rad = self.rad.mul_up(Mag::from_big_up(v, 0));
        Ball::raw(&self.man * v, self.exp, rad, self.prec)
    }

    pub fn div_u64(&self, d: u64) -> Ball {
        assert!(d != 0, "division by zero");
        let k = self.prec as i64 + 72 - bits(&self.man);
        let k = k.max(0);
        let num = &self.man << k as u64;
        let q = num / BigInt::from(d);
        let rad = self
            .rad
            .div_up(Mag::from_u64(d))
            .add_up(Mag::pow2(self.exp - k));
        Ball::raw(q, self.exp - k, rad, self.prec)
    }

    pub fn sqr(&self) -> Ball {
        self * self
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.prec).checked_div(self)
    }

    pub fn checked_div(&self, other: &Ball) -> Result<Ball> {
        let prec = self.prec.max(other.prec);
        let den_lower = other.mag_lower();
        if den_lower.is_zero() {
            return Err(Error::undecided("divisor enclosure contains zero", prec));
        }
        if self.man.is_zero() {
            let rad = self.rad.div_up(den_lower);
            return Ok(Ball {
                man: BigInt::zero(),
                exp: 0,
                rad,
                prec,
            });
        }
        let sh = (prec as i64 + 8 + bits(&other.man) - bits(&self.man)).max(0);
        let q = (&self.man << sh as u64) / &other.man;
        let qexp = self.exp - sh - other.exp;
        let unit = Mag::pow2(qexp);
        let q_abs_up = Mag::from_big_up(&q, qexp).add_up(unit);
        let prop = self
            .rad
            .add_up(q_abs_up.mul_up(other.rad))
            .div_up(den_lower);
        Ok(Ball::raw(q, qexp, prop.add_up(unit), prec))
    }

    pub fn pow_u(&self, n: u64) -> Ball {
        let mut result = Ball::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn pow_i(&self, n: i64) -> Result<Ball> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            self.pow_u(n.unsigned_abs()).recip()
        }
    }

    /// Approximate midpoint value (diagnostics, plotting).
    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let b = bits(&self.man);
        let (m, e) = if b > 60 {
            (&self.man >> (b - 60) as u64, self.exp + b - 60)
        } else {
            (self.man.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        if e > 1100 {
            return m.signum() * f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_rational(&self.mid_rational(), digits)
    }
}

/// Decimal rendering of a rational, rounded to `digits` significant digits.
/// Fixed notation for moderate magnitudes, otherwise `d.ddde<exp>`.
pub fn format_rational(v: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if v.is_zero() {
        return "0".to_string();
    }
    let neg = v.is_negative();
    let a = v.abs();
    let ten = BigInt::from(10);
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let est = (bits(a.numer()) - bits(a.denom())) as f64 * std::f64::consts::LOG10_2;
    let mut e10 = est.floor() as i64;
    loop {
        let p = pow10(e10);
        if a < p {
            e10 -= 1;
        } else if a >= &p * BigRational::from_integer(ten.clone()) {
            e10 += 1;
        } else {
            break;
        }
    }
    let scaled = &a * pow10(digits as i64 - 1 - e10);
    let mut n = scaled.round().to_integer();
    if n == num_traits::pow(ten.clone(), digits) {
        n /= &ten;
        e10 += 1;
    }
    let s = n.to_string();
    let body = if (-6..=20).contains(&e10) {
        if e10 >= 0 {
            let int_len = e10 as usize + 1;
            if int_len >= s.len() {
                format!("{}{}", s, "0".repeat(int_len - s.len()))
            } else {
                let frac = s[int_len..].trim_end_matches('0');
                if frac.is_empty() {
                    s[..int_len].to_string()
                } else {
                    format!("{}.{}", &s[..int_len], frac)
                }
            }
        } else {
            let zeros = (-e10 - 1) as usize;
            format!("0.{}{}", "0".repeat(zeros), s.trim_end_matches('0'))
        }
    } else {
        let frac = s[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{}", &s[..1], e10)
        } else {
            format!("{}.{}e{}", &s[..1], frac, e10)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {:.3e}]",
            self.to_decimal(f.precision().unwrap_or(20)),
            self.rad.to_f64()
        )
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball {
            man: -&self.man,
            exp: self.exp,
            rad: self.rad,
            prec: self.prec,
        }
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -&self
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let rad = self.rad.add_up(other.rad);
        if other.man.is_zero() {
            return Ball::raw(self.man.clone(), self.exp, rad, prec);
        }
        if self.man.is_zero() {
            return Ball::raw(other.man.clone(), other.exp, rad, prec);
        }
        let (x, y) = if self.exp + bits(&self.man) >= other.exp + bits(&other.man) {
            (self, other)
        } else {
            (other, self)
        };
        // Far below the retained bits of x: fold y into the radius.
        let x_top = x.exp + bits(&x.man);
        let y_top = y.exp + bits(&y.man);
        if y_top < x_top - prec as i64 - 64 {
            let rad = rad.add_up(Mag::from_big_up(&y.man, y.exp));
            return Ball::raw(x.man.clone(), x.exp, rad, prec);
        }
        let (m, e) = dyadic_add(&x.man, x.exp, &y.man, y.exp);
        Ball::raw(m, e, rad, prec)
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, other: &Ball) -> Ball {
        self + &(-other)
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let a_mid = Mag::from_big_up(&self.man, self.exp);
        let b_mid = Mag::from_big_up(&other.man, other.exp);
        let rad = a_mid
            .mul_up(other.rad)
            .add_up(b_mid.mul_up(self.rad))
            .add_up(self.rad.mul_up(other.rad));
        Ball::raw(&self.man * &other.man, self.exp + other.exp, rad, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Ball {
            type Output = Ball;
            fn $m(self, other: Ball) -> Ball {
                (&self).$m(&other)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $m(self, other: &Ball) -> Ball {
                (&self).$m(other)
            }
        }
        impl $tr<Ball> for &Ball {
            type Output = Ball;
            fn $m(self, other: Ball) -> Ball {
                self.$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn exact_integers_stay_exact() {
        let a = Ball::from_i64(12345, P);
        let b = Ball::from_i64(-678, P);
        let s = &a + &b;
        assert!(s.is_exact());
        assert!(s.contains_int(&BigInt::from(11667)));
        let p = &a * &b;
        assert!(p.is_exact());
        assert_eq!(p.floor(), Some(BigInt::from(-8369910)));
    }

    #[test]
    fn division_encloses_rational() {
        let a = Ball::from_i64(1, P);
        let b = Ball::from_i64(3, P);
        let q = a.checked_div(&b).unwrap();
        assert!(q.contains_rational(&rat(1, 3)));
        assert!(q.rad().to_f64() < 1e-70);
    }

    #[test]
    fn division_by_ball_with_zero_is_undecided() {
        let z = Ball::from_interval(&rat(-1, 10), &rat(1, 10), P);
        let err = Ball::one(P).checked_div(&z).unwrap_err();
        assert!(err.is_undecided());
    }

    #[test]
    fn tiny_addend_is_folded_into_radius() {
        let big = Ball::from_i64(1, 64);
        let tiny = Ball::from_dyadic(BigInt::one(), -5000, 64);
        let s = &big + &tiny;
        assert!(s.contains_rational(&(rat(1, 1) + dyadic_to_rational(&BigInt::one(), -5000))));
        assert!(s.rad().to_f64() < 1e-18);
    }

    #[test]
    fn sign_and_floor() {
        let x = Ball::from_rational(&rat(7, 2), P);
        assert_eq!(x.sign(), Some(Ordering::Greater));
        assert_eq!(x.floor(), Some(BigInt::from(3)));
        let y = Ball::from_interval(&rat(29, 10), &rat(31, 10), P);
        assert_eq!(y.floor(), None);
        assert_eq!((-&x).floor(), Some(BigInt::from(-4)));
    }

    #[test]
    fn abs_of_straddling_ball() {
        let y = Ball::from_interval(&rat(-1, 4), &rat(1, 2), P);
        let a = y.abs();
        assert!(a.contains_rational(&rat(0, 1)));
        assert!(a.contains_rational(&rat(1, 2)));
        assert!(!a.contains_rational(&rat(-1, 10)));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&rat(49271, 10_000_000), 5), "0.0049271");
        assert_eq!(format_rational(&rat(99, 1), 5), "99");
        assert_eq!(format_rational(&rat(-358, 10), 3), "-35.8");
        let big = BigRational::from_integer(BigInt::from(27) * num_traits::pow(BigInt::from(10), 30));
        assert_eq!(format_rational(&big, 4), "2.7e31");
        assert_eq!(format_rational(&rat(1, 3), 3), "0.333");
        assert_eq!(format_rational(&rat(9999, 1000), 2), "10");
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = Ball::from_ratio(3, 2, P);
        let p = x.pow_u(10);
        assert!(p.contains_rational(&rat(59049, 1024)));
        let inv = x.pow_i(-3).unwrap();
        assert!(inv.contains_rational(&rat(8, 27)));
    }
}
