//! Truncated power series in `q` with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{bernoulli, CommonDenominator, ExactRational};

/// `Σ_{n < len} a_n q^n`, all products truncated to the same length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: Vec<ExactRational>,
}

impl QSeries {
    pub fn new(mut coeffs: Vec<ExactRational>, n_terms: usize) -> Self {
        coeffs.resize(n_terms, ExactRational::zero());
        Self { coeffs }
    }

    pub fn constant(c: ExactRational, n_terms: usize) -> Self {
        Self::new(vec![c], n_terms)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &ExactRational {
        &self.coeffs[n]
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.len().min(other.len());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.len().min(other.len());
        let a = CommonDenominator::from_rationals(&self.coeffs[..n]);
        let b = CommonDenominator::from_rationals(&other.coeffs[..n]);
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.numerators.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.numerators.iter().take(n - i).enumerate() {
                out[i + j] += x * y;
            }
        }
        CommonDenominator {
            numerators: out,
            denominator: a.denominator * b.denominator,
        }
        .to_rationals()
        .into()
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::constant(ExactRational::one(), self.len());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `q d/dq`, i.e. the derivative `(1/2πi) d/dz` on q-expansions.
    pub fn q_derivative(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a.scale(&BigInt::from(n)))
                .collect(),
        }
    }
}

impl From<Vec<ExactRational>> for QSeries {
    fn from(coeffs: Vec<ExactRational>) -> Self {
        Self { coeffs }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.len())
    }
}

/// σ_e(n) by divisor enumeration.
pub fn divisor_power_sum(n: u64, e: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            total += num_traits::pow(BigInt::from(d), e as usize);
            let other = n / d;
            if other != d {
                total += num_traits::pow(BigInt::from(other), e as usize);
            }
        }
        d += 1;
    }
    total
}

/// `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n` for even `k >= 2`, truncated to `n_terms`.
pub fn eisenstein_series(k: u32, n_terms: usize) -> QSeries {
    assert!(k >= 2 && k % 2 == 0, "weight must be even and >= 2");
    let factor = ExactRational::from(-2 * i64::from(k))
        .checked_div(&bernoulli(k))
        .expect("B_k is nonzero for even k");
    let mut coeffs = Vec::with_capacity(n_terms);
    if n_terms > 0 {
        coeffs.push(ExactRational::one());
    }
    for n in 1..n_terms {
        coeffs.push(factor.scale(&divisor_power_sum(n as u64, k - 1)));
    }
    QSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<ExactRational> {
        v.iter().map(|&x| ExactRational::from(x)).collect()
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_power_sum(4, 3), BigInt::from(73));
        assert_eq!(divisor_power_sum(1, 11), BigInt::from(1));
        assert_eq!(divisor_power_sum(6, 1), BigInt::from(12));
        assert_eq!(divisor_power_sum(9, 0), BigInt::from(3));
    }

    #[test]
    fn truncated_product() {
        let a = QSeries::new(ints(&[1, 1]), 4);
        let sq = a.mul(&a);
        assert_eq!(sq.coeffs(), ints(&[1, 2, 1, 0]).as_slice());
        assert_eq!(a.pow(3).coeffs(), ints(&[1, 3, 3, 1]).as_slice());
        assert_eq!(a.pow(5).coeffs(), ints(&[1, 5, 10, 10]).as_slice());
    }

    #[test]
    fn generator_expansions() {
        assert_eq!(eisenstein_series(2, 3).coeffs(), ints(&[1, -24, -72]).as_slice());
        assert_eq!(eisenstein_series(4, 3).coeffs(), ints(&[1, 240, 2160]).as_slice());
        assert_eq!(eisenstein_series(6, 2).coeffs(), ints(&[1, -504]).as_slice());
        assert_eq!(eisenstein_series(4, 5).coeff(4), &ExactRational::from(240 * 73));
    }

    #[test]
    fn derivative() {
        let a = QSeries::new(ints(&[7, 1, 2, 3]), 4);
        assert_eq!(a.q_derivative().coeffs(), ints(&[0, 1, 4, 9]).as_slice());
    }
}
