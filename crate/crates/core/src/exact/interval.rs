use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "interval bounds out of order");
        RationalInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RationalInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(RationalInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn hull(&self, o: &Self) -> Self {
        RationalInterval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    /// Smallest and largest integers inside the interval, if any.
    pub fn integer_range(&self) -> Option<(BigInt, BigInt)> {
        let a = self.lo.ceil().to_integer();
        let b = self.hi.floor().to_integer();
        if a <= b {
            Some((a, b))
        } else {
            None
        }
    }

    /// Outward-rounded float enclosure.
    pub fn to_float(&self) -> FloatInterval {
        FloatInterval {
            lo: rational_to_f64_down(&self.lo),
            hi: rational_to_f64_up(&self.hi),
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn rational_to_f64_down(x: &BigRational) -> f64 {
    let v = x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    if x.is_zero() {
        return 0.0;
    }
    v.next_down().next_down()
}

fn rational_to_f64_up(x: &BigRational) -> f64 {
    let v = x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    if x.is_zero() {
        return 0.0;
    }
    v.next_up().next_up()
}

/// Float interval with outward rounding after every operation. Used only as
/// a filter; every decision it cannot settle falls back to exact arithmetic.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct FloatInterval {
    pub lo: f64,
    pub hi: f64,
}

#[allow(clippy::should_implement_trait)]
impl FloatInterval {
    pub const ZERO: FloatInterval = FloatInterval { lo: 0.0, hi: 0.0 };

    pub fn point(x: f64) -> Self {
        FloatInterval { lo: x, hi: x }
    }

    /// Enclosure of an integer that may not be exactly representable.
    pub fn from_int(n: &BigInt) -> Self {
        let v = n.to_f64().unwrap_or(f64::NAN);
        if BigInt::from(v as i64) == *n && v.abs() < 9.0e15 {
            Self::point(v)
        } else {
            FloatInterval {
                lo: v.next_down(),
                hi: v.next_up(),
            }
        }
    }

    pub fn add(self, o: Self) -> Self {
        FloatInterval {
            lo: (self.lo + o.lo).next_down(),
            hi: (self.hi + o.hi).next_up(),
        }
    }

    pub fn neg(self) -> Self {
        FloatInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if lo == 0.0 && hi == 0.0 {
            return Self::ZERO;
        }
        FloatInterval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn mul_int(self, k: i64) -> Self {
        if k == 0 {
            return Self::ZERO;
        }
        self.mul(Self::point(k as f64))
    }

    /// Division; `None` if the divisor straddles zero.
    pub fn div(self, o: Self) -> Option<Self> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return None;
        }
        let c = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(FloatInterval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        })
    }

    pub fn hull(self, o: Self) -> Self {
        FloatInterval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}
