//! Re-checks a certificate from its JSON alone. Valuations are recomputed
//! here by plain repeated division rather than through the crate's
//! valuation routines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::finite_field::{distinct_degree_pattern, FpPoly};
use super::oracle::compatible_degrees;
use super::{Criterion, IrreducibilityCertificate, Verdict};
use crate::error::{Error, Result};
use crate::exact::{is_prime, ExactRational, Valuation};
use crate::poly::RationalPoly;

fn fail(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}

fn count_factor(mut n: BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

fn naive_valuation(x: &ExactRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    Valuation::Finite(count_factor(x.numer().clone(), &p) - count_factor(x.denom().clone(), &p))
}

fn parse_poly(cert: &IrreducibilityCertificate) -> Result<Vec<ExactRational>> {
    let coeffs = cert
        .poly
        .coefficients
        .iter()
        .map(|s| s.parse::<ExactRational>())
        .collect::<Result<Vec<_>>>()?;
    if coeffs.len() != cert.poly.degree + 1 || cert.poly.degree == 0 {
        return Err(fail("degree does not match coefficient count"));
    }
    if coeffs.last().is_some_and(|c| c.is_zero()) {
        return Err(fail("leading coefficient is zero"));
    }
    Ok(coeffs)
}

fn verify_dumas(cert: &IrreducibilityCertificate, coeffs: &[ExactRational]) -> Result<()> {
    let n = cert.poly.degree;
    if !coeffs[n].is_one() {
        return Err(fail("polynomial is not monic"));
    }
    let p = cert.prime.ok_or_else(|| fail("missing prime"))?;
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p as i64));
    }
    let vals: Vec<Valuation> = coeffs[..n].iter().map(|c| naive_valuation(c, p)).collect();
    if vals != cert.valuations {
        return Err(fail("valuation witness does not match coefficients"));
    }
    if cert.verdict != Verdict::Irreducible {
        return Ok(());
    }
    let Valuation::Finite(v0) = vals[0] else {
        return Err(fail("irreducible verdict with zero constant term"));
    };
    let n_i = n as i64;
    if cert.slope_num != Some(-v0) || cert.slope_den != Some(n_i) {
        return Err(fail("slope witness does not match nu_p(a_0)/n"));
    }
    let g = v0.abs().gcd(&n_i);
    if cert.gcd != Some(g) || g != 1 {
        return Err(fail(format!("gcd(nu_p(a_0), n) = {g}, certificate says {:?}", cert.gcd)));
    }
    for (r, v) in vals.iter().enumerate() {
        if let Valuation::Finite(vr) = *v {
            if vr * n_i < v0 * (n_i - r as i64) {
                return Err(fail(format!("slope condition fails at r = {r}")));
            }
        }
    }
    Ok(())
}

fn verify_patterns(cert: &IrreducibilityCertificate, coeffs: Vec<ExactRational>) -> Result<()> {
    let ints = RationalPoly::new(coeffs).to_primitive_integer();
    let n = ints.len() - 1;
    for pat in &cert.patterns {
        if !is_prime(pat.prime) {
            return Err(Error::InvalidPrime(pat.prime as i64));
        }
        if (ints[n].clone() % BigInt::from(pat.prime)).is_zero() {
            return Err(fail(format!("prime {} divides the leading coefficient", pat.prime)));
        }
        let fp = FpPoly::from_integers(pat.prime, &ints);
        if !fp.is_squarefree() {
            return Err(fail(format!("reduction mod {} is not squarefree", pat.prime)));
        }
        if distinct_degree_pattern(&fp) != pat.degrees {
            return Err(fail(format!("degree pattern mod {} does not match", pat.prime)));
        }
        if pat.degrees.iter().sum::<usize>() != n {
            return Err(fail("degree pattern does not sum to n"));
        }
    }
    if cert.verdict == Verdict::Irreducible
        && (cert.patterns.is_empty() || !compatible_degrees(n, &cert.patterns).is_empty())
    {
        return Err(fail("patterns do not exclude every proper factor degree"));
    }
    Ok(())
}

/// Validates a certificate's witness against its own polynomial data.
/// An `irreducible` verdict passes only if the witness proves it.
pub fn verify_certificate(json: &serde_json::Value) -> Result<()> {
    let cert: IrreducibilityCertificate =
        serde_json::from_value(json.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    if cert.verdict == Verdict::Reducible {
        return Err(fail("no criterion here can witness reducibility"));
    }
    let coeffs = parse_poly(&cert)?;
    match cert.criterion {
        Criterion::Dumas => verify_dumas(&cert, &coeffs),
        Criterion::FiniteFieldPattern => verify_patterns(&cert, coeffs),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{dumas_check, finite_field_degree_patterns};
    use super::*;

    #[test]
    fn accepts_genuine_certificates() {
        let f = RationalPoly::from_integers([2, 2, 1]);
        verify_certificate(&dumas_check(&f, 2).unwrap().to_json()).unwrap();
        let g = RationalPoly::from_integers([1, 0, 1]);
        verify_certificate(&finite_field_degree_patterns(&g, &[3]).unwrap().to_json()).unwrap();
    }

    #[test]
    fn rejects_tampered_dumas_witness() {
        let f = RationalPoly::from_integers([2, 2, 1]);
        let mut json = dumas_check(&f, 2).unwrap().to_json();
        json["poly"]["coefficients"][0] = "4".into();
        assert!(verify_certificate(&json).is_err());

        let f = RationalPoly::from_integers([-1, 0, 1]);
        let mut json = dumas_check(&f, 2).unwrap().to_json();
        verify_certificate(&json).unwrap();
        json["verdict"] = "irreducible".into();
        assert!(verify_certificate(&json).is_err());
    }

    #[test]
    fn rejects_tampered_pattern_witness() {
        let f = RationalPoly::from_integers([1, 0, 0, 0, 1]);
        let mut json = finite_field_degree_patterns(&f, &[3]).unwrap().to_json();
        json["verdict"] = "irreducible".into();
        assert!(verify_certificate(&json).is_err());
        json["patterns"][0]["degrees"] = serde_json::json!([4]);
        assert!(verify_certificate(&json).is_err());
    }
}
