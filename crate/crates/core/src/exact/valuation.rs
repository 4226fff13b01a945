use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactRational;
use crate::error::{Error, Result};

/// p-adic valuation; `Infinity` is reserved for the valuation of zero and
/// compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

// Finite values serialize as JSON integers, infinity as the string "inf".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation `{s}`"))),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p as i64));
    }
    Ok(())
}

/// Exponent of `p` in a nonzero integer. Caller guarantees `n != 0`.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0) as i64;
    }
    let p_big = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p_big);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// ν_p(x) = ν_p(num) − ν_p(den); `Infinity` exactly when `x = 0`.
pub fn valuation(x: &ExactRational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(valuation_unchecked(x, p))
}

pub(crate) fn valuation_unchecked(x: &ExactRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

pub fn integer_valuation(n: &BigInt, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if n.is_zero() {
        return Ok(Valuation::Infinity);
    }
    Ok(Valuation::Finite(int_valuation(n, p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&ExactRational::zero(), 2).unwrap(), Valuation::Infinity);
        assert_eq!(valuation(&q(9, 2), 3).unwrap(), Valuation::Finite(2));
        assert_eq!(valuation(&q(-432000, 691), 2).unwrap(), Valuation::Finite(7));
        assert_eq!(valuation(&q(3, 56), 2).unwrap(), Valuation::Finite(-3));
        assert_eq!(valuation(&q(250, 3), 5).unwrap(), Valuation::Finite(3));
    }

    #[test]
    fn factor_432000_by_trial_division() {
        // 432000 = 2^7 * 3^3 * 5^3
        let mut n = 432000u64;
        let mut twos = 0;
        while n % 2 == 0 {
            n /= 2;
            twos += 1;
        }
        assert_eq!(twos, 7);
        assert_eq!(n, 27 * 125);
    }

    #[test]
    fn invalid_primes_rejected() {
        assert_eq!(valuation(&q(1, 1), 1), Err(Error::InvalidPrime(1)));
        assert_eq!(valuation(&q(1, 1), 0), Err(Error::InvalidPrime(0)));
        assert_eq!(valuation(&q(1, 1), 4), Err(Error::InvalidPrime(4)));
        assert!(valuation(&q(1, 1), 101).is_ok());
        assert!(valuation(&q(1, 1), 221).is_err());
    }

    #[test]
    fn ordering_puts_infinity_on_top() {
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinity);
        assert!(Valuation::Finite(-3) < Valuation::Finite(2));
        let m = [Valuation::Infinity, Valuation::Finite(4), Valuation::Finite(1)]
            .into_iter()
            .min()
            .unwrap();
        assert_eq!(m, Valuation::Finite(1));
    }

    #[test]
    fn json_form() {
        let v = vec![Valuation::Finite(-1), Valuation::Infinity];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[-1,"inf"]"#);
        let back: Vec<Valuation> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
