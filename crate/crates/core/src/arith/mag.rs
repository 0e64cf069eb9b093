//! Non-negative magnitudes with directed rounding, used for ball radii.
//!
//! A `Mag` is `man * 2^exp` with a mantissa of at most `MAN_BITS` bits.
//! Every operation suffixed `_up` returns a value no smaller than the exact
//! result; `_down` conversions return a value no larger.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

const MAN_BITS: u32 = 62;

#[derive(Clone, Copy, Debug)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn bit_len_u128(v: u128) -> u32 {
    128 - v.leading_zeros()
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    /// `2^exp`, exactly.
    pub fn pow2(exp: i64) -> Mag {
        Mag { man: 1, exp }
    }

    fn normalize_up(v: u128, exp: i64) -> Mag {
        if v == 0 {
            return Mag::ZERO;
        }
        let bits = bit_len_u128(v);
        if bits <= MAN_BITS {
            return Mag { man: v as u64, exp };
        }
        let sh = bits - MAN_BITS;
        let mut man = v >> sh;
        if man << sh != v {
            man += 1;
        }
        // Carry may push the mantissa to MAN_BITS + 1 bits; still fits u64.
        Mag {
            man: man as u64,
            exp: exp + sh as i64,
        }
    }

    fn normalize_down(v: u128, exp: i64) -> Mag {
        if v == 0 {
            return Mag::ZERO;
        }
        let bits = bit_len_u128(v);
        if bits <= MAN_BITS {
            return Mag { man: v as u64, exp };
        }
        let sh = bits - MAN_BITS;
        Mag {
            man: (v >> sh) as u64,
            exp: exp + sh as i64,
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::normalize_up(v as u128, 0)
    }

    /// Upper bound on `|v| * 2^exp`.
    pub fn from_big_up(v: &BigInt, exp: i64) -> Mag {
        Mag::from_biguint(v.magnitude(), exp, true)
    }

    /// Lower bound on `|v| * 2^exp`.
    pub fn from_big_down(v: &BigInt, exp: i64) -> Mag {
        Mag::from_biguint(v.magnitude(), exp, false)
    }

    fn from_biguint(v: &BigUint, exp: i64, up: bool) -> Mag {
        if v.is_zero() {
            return Mag::ZERO;
        }
        let bits = v.bits();
        if bits <= 120 {
            let small = u128::try_from(v).expect("fits in u128");
            return if up {
                Mag::normalize_up(small, exp)
            } else {
                Mag::normalize_down(small, exp)
            };
        }
        let sh = bits - 100;
        let top = v >> sh;
        let mut small = u128::try_from(&top).expect("fits in u128");
        if up && (&top << sh) != *v {
            small += 1;
        }
        let exp = exp + sh as i64;
        if up {
            Mag::normalize_up(small, exp)
        } else {
            Mag::normalize_down(small, exp)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// The exact value as `(mantissa, exponent)`.
    pub fn to_parts(&self) -> (BigInt, i64) {
        (BigInt::from(self.man), self.exp)
    }

    /// Position of the highest set bit plus one, i.e. `self < 2^top_exp()`.
    pub fn top_exp(&self) -> Option<i64> {
        if self.man == 0 {
            None
        } else {
            Some(self.exp + (64 - self.man.leading_zeros()) as i64)
        }
    }

    pub fn add_up(self, other: Mag) -> Mag {
        if self.man == 0 {
            return other;
        }
        if other.man == 0 {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let d = (hi.exp - lo.exp) as u64;
        if d >= 64 {
            // lo < 2^(lo.exp + 64) <= 2^hi.exp: absorbed by one unit of hi.
            Mag::normalize_up(hi.man as u128 + 1, hi.exp)
        } else {
            let v = ((hi.man as u128) << d) + lo.man as u128;
            Mag::normalize_up(v, lo.exp)
        }
    }

    pub fn mul_up(self, other: Mag) -> Mag {
        if self.man == 0 || other.man == 0 {
            return Mag::ZERO;
        }
        Mag::normalize_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    /// Upper bound on `self / den`. `den` must be non-zero.
    pub fn div_up(self, den: Mag) -> Mag {
        assert!(den.man != 0, "division of a magnitude by zero");
        if self.man == 0 {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let d = den.man as u128;
        let mut q = num / d;
        if q * d != num {
            q += 1;
        }
        Mag::normalize_up(q, self.exp - 64 - den.exp)
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.man == 0 {
            self
        } else {
            Mag {
                man: self.man,
                exp: self.exp + e,
            }
        }
    }

    /// Approximate value, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.man == 0 {
            return 0.0;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        (self.man as f64) * 2f64.powi(e)
    }
}

impl PartialEq for Mag {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Mag {}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.man == 0, other.man == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = BigUint::from(self.man) << (self.exp - e) as u64;
        let b = BigUint::from(other.man) << (other.exp - e) as u64;
        a.cmp(&b)
    }
}
