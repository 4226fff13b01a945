use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    /// `self^exp` for any integer exponent; negative exponents of zero fail.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = exp.unsigned_abs();
        let num = num_traits::pow::Pow::pow(self.numer(), e);
        let den = num_traits::pow::Pow::pow(self.denom(), e);
        if exp >= 0 {
            Ok(Self(BigRational::new_raw(num, den)))
        } else {
            Ok(Self(BigRational::new(den, num)))
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self(&self.0 * BigRational::from_integer(factor.clone()))
    }

    /// Always `num/den`, including `n/1` for integers; used by every file format.
    pub fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<i32> for ExactRational {
    fn from(n: i32) -> Self {
        Self::from_integer(n)
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
        };
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse_int(n)?, parse_int(d)?),
            None => Ok(Self::from_integer(parse_int(s)?)),
        }
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $assign_imp:ident, $assign_method:ident) => {
        impl<'a> $imp<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }

        impl $imp<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }

        impl<'a> $imp<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }

        impl<'a> $assign_imp<&'a ExactRational> for ExactRational {
            fn $assign_method(&mut self, rhs: &'a ExactRational) {
                self.0.$assign_method(&rhs.0);
            }
        }

        impl $assign_imp<ExactRational> for ExactRational {
            fn $assign_method(&mut self, rhs: ExactRational) {
                self.0.$assign_method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

/// Integer numerators over one shared denominator.
///
/// Products and long sums of rationals are done on this form so that only one
/// gcd reduction per output coefficient is paid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonDenominator {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl CommonDenominator {
    pub fn from_rationals<'a, I>(values: I) -> Self
    where
        I: IntoIterator<Item = &'a ExactRational>,
        I::IntoIter: Clone,
    {
        let iter = values.into_iter();
        let denominator = iter
            .clone()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let numerators = iter
            .map(|v| v.numer() * (&denominator / v.denom()))
            .collect();
        Self {
            numerators,
            denominator,
        }
    }

    pub fn to_rationals(&self) -> Vec<ExactRational> {
        self.numerators
            .iter()
            .map(|n| ExactRational(BigRational::new(n.clone(), self.denominator.clone())))
            .collect()
    }
}

impl PartialEq<i64> for ExactRational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.numer() == &BigInt::from(*other)
    }
}

/// Exact comparison `a/b` against `c/d` by cross multiplication (b, d > 0).
pub fn cmp_fractions(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
    debug_assert!(b.is_positive() && d.is_positive());
    (a * d).cmp(&(c * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = q(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(q(0, -7), ExactRational::zero());
        assert_eq!(q(0, 5).denom(), &BigInt::from(1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(ExactRational::new(1, 0), Err(Error::DivisionByZero));
        assert_eq!(q(1, 2).checked_div(&ExactRational::zero()), Err(Error::DivisionByZero));
        assert_eq!(ExactRational::zero().recip(), Err(Error::DivisionByZero));
        assert!(ExactRational::zero().pow(-1).is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(1, 2) - q(1, 3), q(1, 6));
        assert_eq!(q(2, 3) * q(9, 4), q(3, 2));
        assert_eq!(q(2, 3).checked_div(&q(4, 9)).unwrap(), q(3, 2));
        assert_eq!(q(2, 3).pow(-3).unwrap(), q(27, 8));
        assert_eq!(q(-2, 3).pow(3).unwrap(), q(-8, 27));
    }

    #[test]
    fn parse_and_print() {
        let x: ExactRational = "-432000/691".parse().unwrap();
        assert_eq!(x.to_string(), "-432000/691");
        assert_eq!("240".parse::<ExactRational>().unwrap().to_ratio_string(), "240/1");
        assert_eq!("4/6".parse::<ExactRational>().unwrap(), q(2, 3));
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
    }

    #[test]
    fn common_denominator_roundtrip() {
        let vals = vec![q(1, 6), q(-3, 4), q(5, 1)];
        let cd = CommonDenominator::from_rationals(&vals);
        assert_eq!(cd.denominator, BigInt::from(12));
        assert_eq!(cd.to_rationals(), vals);
    }

    proptest::proptest! {
        #[test]
        fn reciprocal_product_is_one(n in -10_000i64..10_000, d in 1i64..10_000) {
            proptest::prop_assume!(n != 0);
            let x = q(n, d);
            proptest::prop_assert!((&x * &x.recip().unwrap()).is_one());
        }

        #[test]
        fn canonical_form_is_unique(n in -500i64..500, d in 1i64..500, s in 1i64..50) {
            proptest::prop_assert_eq!(q(n, d), q(n * s, d * s));
            proptest::prop_assert_eq!(q(n, d).to_ratio_string(), q(-n * s, -d * s).to_ratio_string());
        }
    }
}
