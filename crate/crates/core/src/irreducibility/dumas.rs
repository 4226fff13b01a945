use num_integer::Integer;

use super::newton::check_monic;
use super::{Criterion, IrreducibilityCertificate, PolyRef, Verdict};
use crate::error::Result;
use crate::exact::{valuation, Valuation};
use crate::poly::RationalPoly;

/// Dumas criterion at `p` for monic `f = Σ a_r x^r` of degree `n`:
/// irreducible over `Q` if (i) `ν_p(a_r)/(n−r) >= ν_p(a_0)/n` for all
/// `0 <= r < n` and (ii) `gcd(ν_p(a_0), n) = 1`. Never reports reducible.
pub fn dumas_check(f: &RationalPoly, p: u64) -> Result<IrreducibilityCertificate> {
    let n = check_monic(f)?;
    let valuations = f.coeffs()[..n]
        .iter()
        .map(|c| valuation(c, p))
        .collect::<Result<Vec<_>>>()?;
    let mut cert = IrreducibilityCertificate {
        poly: PolyRef::new(f.to_string(), f),
        prime: Some(p),
        valuations,
        slope_num: None,
        slope_den: None,
        gcd: None,
        verdict: Verdict::Inconclusive,
        criterion: Criterion::Dumas,
        patterns: Vec::new(),
        skipped_primes: Vec::new(),
        reason: None,
    };
    let Valuation::Finite(v0) = cert.valuations[0] else {
        cert.reason = Some("zero constant term".into());
        return Ok(cert);
    };
    let n_i = n as i64;
    cert.slope_num = Some(-v0);
    cert.slope_den = Some(n_i);
    let g = v0.gcd(&n_i);
    cert.gcd = Some(g);

    let offending = cert.valuations.iter().enumerate().find(|&(r, v)| match v {
        Valuation::Infinity => false,
        Valuation::Finite(vr) => vr * n_i < v0 * (n_i - r as i64),
    });
    if let Some((r, _)) = offending {
        cert.reason = Some(format!("slope condition fails at r = {r}"));
    } else if g != 1 {
        cert.reason = Some(format!("gcd(nu_p(a_0), n) = {g}"));
    } else {
        cert.verdict = Verdict::Irreducible;
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::exact::ExactRational;

    #[test]
    fn eisenstein_case() {
        let c = dumas_check(&RationalPoly::from_integers([2, 2, 1]), 2).unwrap();
        assert_eq!(c.verdict, Verdict::Irreducible);
        assert_eq!(c.gcd, Some(1));
        assert_eq!(c.valuations, vec![Valuation::Finite(1), Valuation::Finite(1)]);
    }

    #[test]
    fn gcd_failure_is_inconclusive() {
        let c = dumas_check(&RationalPoly::from_integers([-1, 0, 1]), 2).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.gcd, Some(2));
    }

    #[test]
    fn zero_constant_term() {
        let c = dumas_check(&RationalPoly::from_integers([0, 3, 1]), 3).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.reason.as_deref(), Some("zero constant term"));
    }

    #[test]
    fn sparse_coefficients_pass_vacuously() {
        // x^5 + 2: only a_0 and a_5 nonzero
        let c = dumas_check(&RationalPoly::from_integers([2, 0, 0, 0, 0, 1]), 2).unwrap();
        assert_eq!(c.verdict, Verdict::Irreducible);
        assert!(c.valuations[1..].iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn negative_constant_valuation() {
        // x^2 + 1/2: points (0,-1), (2,0)
        let f = RationalPoly::new(vec![ExactRational::new(1, 2).unwrap(), 0.into(), 1.into()]);
        assert_eq!(dumas_check(&f, 2).unwrap().verdict, Verdict::Irreducible);
    }

    #[test]
    fn slope_failure() {
        let c = dumas_check(&RationalPoly::from_integers([4, 1, 1]), 2).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.reason.unwrap().contains("r = 1"));
    }

    #[test]
    fn rejects_non_monic_and_bad_prime() {
        assert!(matches!(
            dumas_check(&RationalPoly::from_integers([1, 2]), 2),
            Err(Error::InvalidPolynomial(_))
        ));
        assert!(matches!(
            dumas_check(&RationalPoly::from_integers([2, 1]), 4),
            Err(Error::InvalidPrime(4))
        ));
    }

    #[test]
    fn json_field_order() {
        let c = dumas_check(&RationalPoly::from_integers([2, 2, 1]), 2).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let keys = [
            "\"poly\"", "\"prime\"", "\"valuations\"", "\"slope_num\"", "\"slope_den\"", "\"gcd\"",
            "\"verdict\"", "\"criterion\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{s}");
        assert!(s.contains("\"verdict\":\"irreducible\""));
        assert!(s.contains("\"criterion\":\"dumas\""));
    }
}
