//! The polynomial `φ_k` in `X = j` whose roots are the j-invariants of the
//! zeros of `E_k` away from `j = 0, 1728`.
//!
//! Writing `k = 12m + 4δ + 6ε` with `δ ∈ {0,1,2}`, `ε ∈ {0,1}`,
//! `E_k = Δ^m E_4^δ E_6^ε φ_k(j)` with `φ_k` monic of degree `m`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::eisenstein::EisensteinTable;
use crate::error::{domain, Error, Result};
use crate::exact::{binomial, valuation, zeta_ratio, ExactRational, Valuation};
use crate::poly::RationalPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GekelerPolynomial {
    weight: u32,
    delta: u32,
    epsilon: u32,
    poly: RationalPoly,
}

/// `(m, δ, ε)` with `k = 12m + 4δ + 6ε`.
pub fn weight_decomposition(k: u32) -> Result<(u32, u32, u32)> {
    if k < 4 || k % 2 == 1 {
        return Err(domain("weight decomposition", k, "even k >= 4"));
    }
    let (delta, epsilon) = match k % 12 {
        0 => (0, 0),
        2 => (2, 1),
        4 => (1, 0),
        6 => (0, 1),
        8 => (2, 0),
        10 => (1, 1),
        _ => unreachable!("k is even"),
    };
    Ok(((k - 4 * delta - 6 * epsilon) / 12, delta, epsilon))
}

impl GekelerPolynomial {
    fn new(weight: u32, poly: RationalPoly) -> Result<Self> {
        let (m, delta, epsilon) = weight_decomposition(weight)?;
        if poly.degree() != Some(m as usize) || !poly.is_monic() {
            return Err(Error::Consistency(format!(
                "phi_{weight} must be monic of degree {m}, got {poly}"
            )));
        }
        Ok(Self {
            weight,
            delta,
            epsilon,
            poly,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("monic")
    }

    /// `(δ, ε)`: orders of vanishing forced at `j = 0` (as `E_4^δ`) and at
    /// `j = 1728` (as `E_6^ε`).
    pub fn elliptic_exponents(&self) -> (u32, u32) {
        (self.delta, self.epsilon)
    }

    /// `t_{k,0}, …, t_{k,m}` with `t_{k,m} = 1`.
    pub fn coefficients(&self) -> &[ExactRational] {
        self.poly.coeffs()
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn to_json(&self, p: u64) -> Result<serde_json::Value> {
        #[derive(Serialize)]
        struct View<'a> {
            weight: u32,
            degree: usize,
            delta: u32,
            epsilon: u32,
            coefficients: Vec<String>,
            prime: u64,
            valuations: &'a [Valuation],
        }
        let vals = valuation_profile(self, p)?;
        Ok(serde_json::to_value(View {
            weight: self.weight,
            degree: self.degree(),
            delta: self.delta,
            epsilon: self.epsilon,
            coefficients: self.coefficients().iter().map(|c| c.to_ratio_string()).collect(),
            prime: p,
            valuations: &vals,
        })
        .expect("plain data"))
    }
}

/// `φ_k` from the closed formula for `k ≡ 0 (mod 12)`:
///
/// ```text
/// t_{k,r} = (2/r_k) (−1)^{m−r} Σ_{a=0}^{r} w_{3a,k} 2^{8m−6r−2a−1}
///           / (3^{3m+3r} 5^{a+2m} 7^{2m−2a}) · C(m−a, m−r),      m = k/12
/// ```
///
/// The formula is evaluated for every `0 <= r <= m`; the value at `r = m`
/// must come out as 1.
pub fn phi_closed_form(k: u32, table: &EisensteinTable) -> Result<GekelerPolynomial> {
    if k == 0 || k % 12 != 0 {
        return Err(domain("phi_closed_form", k, "k a positive multiple of 12"));
    }
    let w = table.get(k)?;
    let m = i64::from(k / 12);
    let prefactor = ExactRational::from(2).checked_div(&zeta_ratio(k)?)?;
    let two = ExactRational::from(2);
    let three = ExactRational::from(3);
    let five = ExactRational::from(5);
    let seven = ExactRational::from(7);

    let mut coeffs = Vec::with_capacity(m as usize + 1);
    for r in 0..=m {
        let mut sum = ExactRational::zero();
        for a in 0..=r {
            let Some(w_a) = w.get(3 * a as u32) else {
                return Err(Error::Consistency(format!("w_(3a,{k}) missing for a = {a}")));
            };
            if w_a.is_zero() {
                continue;
            }
            let scale = two.pow(8 * m - 6 * r - 2 * a - 1)?
                * three.pow(-(3 * m + 3 * r))?
                * five.pow(-(a + 2 * m))?
                * seven.pow(-(2 * m - 2 * a))?;
            let b = binomial((m - a) as u64, m - r);
            sum += (w_a * &scale).scale(&b);
        }
        let sign = if (m - r) % 2 == 0 { 1 } else { -1 };
        coeffs.push((sum * &prefactor).scale(&BigInt::from(sign)));
    }
    GekelerPolynomial::new(k, RationalPoly::new(coeffs))
}

/// `φ_k` for any even `k >= 4` by exact division in `Q[E4, E6]`:
/// `E_k / (E_4^δ E_6^ε)` is rewritten monomial by monomial with
/// `E_4^{3a} E_6^{2(m−a)} / Δ^m = j^a (j − 1728)^{m−a}`.
pub fn phi_by_division(k: u32, table: &EisensteinTable) -> Result<GekelerPolynomial> {
    let (m, delta, epsilon) = weight_decomposition(k)?;
    let e_form = table.get(k)?.to_e_form()?;
    let x = RationalPoly::linear(ExactRational::zero());
    let x_minus_1728 = RationalPoly::linear(ExactRational::from(1728));
    let mut poly = RationalPoly::zero();
    for (mono, c) in e_form.terms() {
        if mono.e2 != 0 || mono.e4 < delta || mono.e6 < epsilon {
            return Err(Error::Consistency(format!(
                "E_{k} is not divisible by E4^{delta} E6^{epsilon}: term {c}*{mono}"
            )));
        }
        let e4 = mono.e4 - delta;
        let e6 = mono.e6 - epsilon;
        if e4 % 3 != 0 || e6 % 2 != 0 || e4 / 3 + e6 / 2 != m {
            return Err(Error::Consistency(format!(
                "unexpected monomial {mono} in E_{k}"
            )));
        }
        let a = e4 / 3;
        let term = x.pow(a).mul(&x_minus_1728.pow(m - a)).scale(c);
        poly = poly.add(&term);
    }
    GekelerPolynomial::new(k, poly)
}

/// `(ν_p(t_{k,0}), …, ν_p(t_{k,m−1}))`.
pub fn valuation_profile(phi: &GekelerPolynomial, p: u64) -> Result<Vec<Valuation>> {
    let coeffs = phi.coefficients();
    coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| valuation(c, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::Recurrence;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn table(k: u32) -> EisensteinTable {
        EisensteinTable::build(k, Recurrence::Rademacher).unwrap()
    }

    #[test]
    fn decompositions() {
        assert_eq!(weight_decomposition(4).unwrap(), (0, 1, 0));
        assert_eq!(weight_decomposition(6).unwrap(), (0, 0, 1));
        assert_eq!(weight_decomposition(14).unwrap(), (0, 2, 1));
        assert_eq!(weight_decomposition(16).unwrap(), (1, 1, 0));
        assert_eq!(weight_decomposition(24).unwrap(), (2, 0, 0));
        assert!(weight_decomposition(2).is_err());
        for k in (4..=500).step_by(2) {
            let (m, d, e) = weight_decomposition(k).unwrap();
            assert_eq!(12 * m + 4 * d + 6 * e, k);
            assert!(d <= 2 && e <= 1);
        }
    }

    #[test]
    fn phi_12_both_routes() {
        let t = table(12);
        let expected = vec![q("-432000/691"), q("1")];
        let a = phi_closed_form(12, &t).unwrap();
        let b = phi_by_division(12, &t).unwrap();
        assert_eq!(a.coefficients(), expected.as_slice());
        assert_eq!(a, b);
        assert_eq!(valuation_profile(&a, 2).unwrap(), vec![Valuation::Finite(7)]);
    }

    #[test]
    fn phi_16_and_24_match_published_values() {
        let t = table(24);
        let phi16 = phi_by_division(16, &t).unwrap();
        assert_eq!(phi16.coefficients(), [q("-3456000/3617"), q("1")]);
        assert_eq!(phi16.elliptic_exponents(), (1, 0));
        let phi24 = phi_closed_form(24, &t).unwrap();
        assert_eq!(
            phi24.coefficients(),
            [q("30710845440000/236364091"), q("-340364160000/236364091"), q("1")]
        );
        assert_eq!(phi24, phi_by_division(24, &t).unwrap());
        let profile = valuation_profile(&phi24, 2).unwrap();
        assert_eq!(profile[0], Valuation::Finite(15));
    }

    #[test]
    fn constant_polynomials_for_small_weights() {
        let t = table(14);
        for k in [4, 6, 8, 10, 14] {
            let phi = phi_by_division(k, &t).unwrap();
            assert_eq!(phi.degree(), 0);
            assert_eq!(phi.coefficients(), [ExactRational::one()]);
            assert!(valuation_profile(&phi, 2).unwrap().is_empty());
        }
    }

    #[test]
    fn closed_form_rejects_other_weights() {
        let t = table(16);
        assert!(matches!(phi_closed_form(16, &t), Err(Error::Domain { .. })));
        assert!(matches!(phi_closed_form(36, &t), Err(Error::MissingWeight(36))));
    }

    #[test]
    fn monic_up_to_36() {
        let t = table(36);
        for k in [12, 24, 36] {
            assert!(phi_closed_form(k, &t).unwrap().poly().is_monic());
        }
    }

    #[test]
    fn corrupted_expansion_breaks_division() {
        use crate::eisenstein::{Provenance, WVector};
        let mut t = table(16);
        // G_16 has a = 1, 4; a wrong coefficient destroys monicity
        let w = t.get(16).unwrap().clone();
        let mut coeffs = w.coeffs().to_vec();
        coeffs[0] = &coeffs[0] + &ExactRational::one();
        t.replace_unchecked(WVector::new(16, coeffs).unwrap(), Provenance::Imported);
        assert!(matches!(phi_by_division(16, &t), Err(Error::Consistency(_))));
    }
}
