//! Exact rational scalars.
//!
//! [`Rational`] wraps an arbitrary-precision ratio that is always kept in
//! lowest terms with a positive denominator. Its text form is `"num/den"`
//! (`"0/1"` for zero). Parsing accepts integers, fractions and plain
//! decimal literals, the latter converted without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numerator / denominator` in canonical form.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let d = denominator.into();
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numerator.into(), d)))
    }

    /// Infallible constructor for literals in code and tests.
    ///
    /// Panics if `den` is zero.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Rational)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            let (negative, digits) = match int_part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            let all_digits = |x: &str| x.bytes().all(|c| c.is_ascii_digit());
            if !all_digits(digits) || !all_digits(frac_part) || (digits.is_empty() && frac_part.is_empty()) {
                return Err(bad());
            }
            let joined = format!("{digits}{frac_part}");
            let mut n: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().map_err(|_| bad())? };
            if negative {
                n = -n;
            }
            let d = num::pow(BigInt::from(10u32), frac_part.len());
            return Rational::new(n, d);
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $Assign:ident, $assign:ident) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $Assign<&Rational> for Rational {
            fn $assign(&mut self, rhs: &Rational) {
                self.0 = (&self.0).$method(&rhs.0);
            }
        }
        impl $Assign<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                self.0 = (&self.0).$method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

// Division by zero panics, matching the wrapped type. Use `recip` for a
// checked path.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, v| acc + v)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, v| acc * v)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(v: f64, digits: i32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let s = format!("{:.*e}", (digits - 1).max(0) as usize, v);
    s.parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes_on_construction() {
        assert_eq!(Rational::new(2, 4).unwrap().to_string(), "1/2");
        assert_eq!(Rational::new(3, -6).unwrap().to_string(), "-1/2");
        assert_eq!(Rational::new(0, 7).unwrap().to_string(), "0/1");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(Rational::new(1, 0), Err(Error::ZeroDenominator)));
        assert!("3/0".parse::<Rational>().is_err());
        assert!(Rational::zero().recip().is_err());
    }

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(r("7"), Rational::integer(7));
        assert_eq!(r("-7"), Rational::integer(-7));
        assert_eq!(r("114/35"), Rational::frac(114, 35));
        assert_eq!(r("6/-4"), Rational::frac(-3, 2));
        assert_eq!(r("0.5"), Rational::frac(1, 2));
        assert_eq!(r("-1.25"), Rational::frac(-5, 4));
        assert_eq!(r(".125"), Rational::frac(1, 8));
        assert_eq!(r("3."), Rational::integer(3));
        assert_eq!(r("0.1") * Rational::integer(10), Rational::one());
        for bad in ["", "abc", "1/2/3", "1.2.3", "-.", ".", "1/x", "1e5", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn serde_uses_canonical_string() {
        let v = Rational::frac(-2, 4);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "\"-1/2\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Rational>("\"1/0\"").is_err());
    }

    #[test]
    fn comparisons_with_integers() {
        assert!(Rational::frac(1, 2) > 0);
        assert!(Rational::frac(1, 2) < 1);
        assert_eq!(Rational::frac(4, 2), 2);
        assert_ne!(Rational::frac(1, 2), 0);
    }

    #[test]
    fn round_sig_keeps_twelve_digits() {
        assert_eq!(round_sig(114.0 / 35.0, 12), 3.25714285714);
        assert_eq!(round_sig(-2.0 / 3.0, 12), -0.666666666667);
        assert_eq!(round_sig(0.0, 12), 0.0);
    }
}
