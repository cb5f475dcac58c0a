//! Exact rationals with an `i64` fast path.
//!
//! Values are kept canonical: a number whose reduced numerator and denominator
//! both fit in `i64` is always stored as [`Rational::Small`], so structural
//! equality and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Debug)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(Ratio::from_integer(0))
    }

    pub fn one() -> Self {
        Rational::Small(Ratio::from_integer(1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational::Small(Ratio::from_integer(n))
    }

    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            // `Ratio::new_raw` is fine: BigRational is already reduced with den > 0.
            (Some(n), Some(d)) => Rational::Small(Ratio::new_raw(n, d)),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => {
                BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.numer().is_zero(),
            Rational::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rational::Small(r) => *r.numer() == 1 && *r.denom() == 1,
            Rational::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => *r.numer() < 0,
            Rational::Big(r) => r.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.numer()),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.denom()),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    /// Returns the value as an integer if the denominator is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Rational::Small(r) if r.is_integer() => Some(BigInt::from(*r.numer())),
            Rational::Big(r) if r.is_integer() => Some(r.numer().clone()),
            _ => None,
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(r.recip()),
            _ => Self::from_big(self.to_big().recip()),
        }
    }

    /// `self -= f * x`, the inner step of every elimination loop.
    pub fn sub_mul_assign(&mut self, f: &Rational, x: &Rational) {
        if let (Rational::Small(a), Rational::Small(b), Rational::Small(c)) = (&*self, f, x) {
            if let Some(r) = b.checked_mul(c).and_then(|p| a.checked_sub(&p)) {
                *self = Rational::Small(r);
                return;
            }
        }
        let r = self.to_big() - f.to_big() * x.to_big();
        *self = Self::from_big(r);
    }

    pub fn div(&self, other: &Rational) -> Rational {
        self * &other.recip()
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_int(n as i64)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a == b,
            (Rational::Big(a), Rational::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small(r) => {
                0u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Rational::Big(r) => {
                1u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                if let (Rational::Small(a), Rational::Small(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(b) {
                        return Rational::Small(r);
                    }
                }
                Rational::from_big(self.to_big().$method(rhs.to_big()))
            }
        }

        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-*r),
            _ => Rational::from_big(-self.to_big()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Rational::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

/// Builds a rational from big numerator and denominator parts (used by the cache reader).
pub fn from_parts(num: BigInt, den: BigInt) -> Result<Rational, Error> {
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::from_big(BigRational::new(num, den)))
}
