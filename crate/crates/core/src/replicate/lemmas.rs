//! Binomial valuation identity and the valuation bounds on the rescaled
//! Popa recurrence coefficients.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde_json::json;

use super::{even_weights, CheckReport, Record};
use crate::eisenstein::{constants, d_coefficient};
use crate::exact::{
    binomial, digit_sum_base2, factorial, valuation_unchecked, ExactRational, Valuation,
};

/// `(−1)^{k/2} + C(k, k/2 − 1)`.
pub(crate) fn signed_central_sum(k: u32) -> BigInt {
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    binomial(u64::from(k), i64::from(k / 2) - 1) + sign
}

/// `k + 2 = 2^ℓ` with `ℓ >= 3`.
pub(crate) fn is_sharp_weight(k: u32) -> bool {
    k >= 6 && (k + 2).is_power_of_two()
}

fn nu(x: &ExactRational) -> Valuation {
    valuation_unchecked(x, 2)
}

fn nu_int(n: &BigInt) -> Valuation {
    nu(&ExactRational::from_integer(n.clone()))
}

fn valsum_record(k: u32) -> Record {
    let sum = signed_central_sum(k);
    let v = nu_int(&sum);
    let sharp = is_sharp_weight(k);
    let mut rec = Record::new(k)
        .computed("sum_valuation", v)
        .computed("valuation_is_one", v == Valuation::Finite(1))
        .expected("valuation_is_one", sharp)
        .require((v == Valuation::Finite(1)) == sharp, || {
            format!("nu_2 = {v} but k + 2 power of two is {sharp}")
        });
    if sharp {
        let residue = binomial(u64::from(k), i64::from(k / 2) - 1).mod_floor(&BigInt::from(4));
        rec = rec
            .computed("binomial_mod4", residue.to_string())
            .expected("binomial_mod4", "3")
            .require(residue == BigInt::from(3), || {
                format!("C(k, k/2-1) = {residue} mod 4")
            });
    }
    rec
}

/// For even `4 <= k <= k_max`: `ν_2((−1)^{k/2} + C(k, k/2−1)) = 1` exactly when
/// `k + 2` is a power of two (`>= 8`), in which case `C(k, k/2−1) ≡ 3 (mod 4)`.
pub fn check_lemma_valsum(k_max: u32) -> CheckReport {
    let started = Instant::now();
    let records = even_weights(4, k_max).into_par_iter().map(valsum_record).collect();
    CheckReport::new("lemma-valsum", json!({ "k_max": k_max }), records, started)
}

fn ineq_record(k: u32, d: &[ExactRational]) -> Record {
    let dk = |i: u32| &d[i as usize / 2];
    let cst = match constants(k) {
        Ok(c) => c,
        Err(e) => return Record::new(k).require(false, || e.to_string()),
    };
    let half = k / 2;
    let s = ExactRational::from_integer(signed_central_sum(k));
    let nu_s = nu(&s).finite().expect("nonzero sum");
    let cd = &cst.c * &cst.d;
    let two_cd = &cd * &ExactRational::from(2);

    // d_{k−2} / (2 c_k d_k)
    let q1 = dk(k - 2).checked_div(&two_cd).expect("c_k d_k nonzero");
    let q1_alt = ExactRational::from_integer(factorial(u64::from(k) - 2) * -2)
        .checked_div(
            &(ExactRational::from_integer(factorial(u64::from(half) - 1) * factorial(u64::from(half)))
                * &s),
        )
        .expect("nonzero");
    let v1 = nu(&q1);
    let v1_formula = i64::from(digit_sum_base2(u64::from(half))) - nu_s;

    // k d_{k/2}^2 / (2 c_k d_k), through (k/2 − 1)/S; the d-form needs k/2 even
    let q2_alt = ExactRational::from(i64::from(half) - 1)
        .checked_div(&s)
        .expect("nonzero");
    let q2_direct = (half % 2 == 0).then(|| {
        (dk(half) * dk(half))
            .scale(&BigInt::from(k))
            .checked_div(&two_cd)
            .expect("nonzero")
    });
    let v2 = nu(&q2_alt);
    let v2_formula = nu(&ExactRational::from(i64::from(half) - 1)).finite().expect("k >= 4") - nu_s;

    let mut rec = Record::new(k)
        .computed("nu_d_ratio", v1)
        .computed("nu_square_ratio", v2)
        .expected("nu_d_ratio", v1_formula)
        .expected("nu_square_ratio", v2_formula)
        .require(q1 == q1_alt, || "d-ratio factorial form disagrees".into())
        .require(v1 == Valuation::Finite(v1_formula), || format!("nu(d-ratio) = {v1}, formula {v1_formula}"))
        .require(v1 >= Valuation::Finite(1), || format!("nu(d-ratio) = {v1} < 1"))
        .require(q2_direct.as_ref().is_none_or(|q| q == &q2_alt), || {
            "square-ratio rewrite disagrees".into()
        })
        .require(v2 == Valuation::Finite(v2_formula), || format!("nu(square-ratio) = {v2}, formula {v2_formula}"))
        .require(v2 >= Valuation::Finite(0), || format!("nu(square-ratio) = {v2} < 0"));

    let mut min_pair: Option<Valuation> = None;
    let sharp = is_sharp_weight(k);
    let mut sharp_pair = None;
    for j in (3..=half.saturating_sub(2)).step_by(2) {
        let base = (dk(j + 1) * dk(k - j - 1)).checked_div(&cd).expect("nonzero");
        let a = base.scale(&binomial(u64::from(half), i64::from(j)));
        let b = base.scale(&binomial(u64::from(half) - 2, i64::from(j)));
        let a_alt = ExactRational::from_integer(binomial(u64::from(k - j - 2), i64::from(half) - 2))
            .checked_div(&s)
            .expect("nonzero");
        let b_alt = ExactRational::from_integer(binomial(u64::from(k - j - 2), i64::from(half)))
            .checked_div(&s)
            .expect("nonzero");
        rec = rec.require(a == a_alt && b == b_alt, || format!("binomial rewrite disagrees at j = {j}"));
        let v = nu(&(&a + &b));
        rec = rec.require(v >= Valuation::Finite(0), || format!("nu(pair) = {v} < 0 at j = {j}"));
        min_pair = Some(min_pair.map_or(v, |m| m.min(v)));
        if sharp && j == half - 2 {
            sharp_pair = Some([nu(&a), nu(&b)]);
        }
    }
    rec = rec
        .computed("min_nu_pair", min_pair)
        .expected("min_nu_pair_at_least", 0);
    if sharp && half >= 5 {
        let pair = sharp_pair.expect("j = k/2 - 2 is odd and >= 3");
        rec = rec
            .computed("sharp_pair", pair)
            .expected("sharp_pair", [-1, -1])
            .require(pair == [Valuation::Finite(-1); 2], || {
                format!("sharp pair valuations {} and {}", pair[0], pair[1])
            });
    }
    rec
}

/// For even `4 <= k <= k_max` and odd `3 <= j <= k/2 − 2`:
/// `ν_2(d_{k−2}/(2c_kd_k)) >= 1`, `ν_2(k d_{k/2}²/(2c_kd_k)) >= 0`,
/// `ν_2((C(k/2,j) + C(k/2−2,j)) d_{j+1}d_{k−j−1}/(c_kd_k)) >= 0`, together with
/// the closed rewrites of each quantity and the sharp pair at `j = k/2 − 2`
/// when `k + 2` is a power of two.
pub fn check_lemma_ineq(k_max: u32) -> CheckReport {
    let started = Instant::now();
    let d: Vec<ExactRational> = (0..=k_max / 2)
        .map(|h| d_coefficient(2 * h).unwrap_or_else(|_| ExactRational::zero()))
        .collect();
    let records = even_weights(4, k_max)
        .into_par_iter()
        .map(|k| ineq_record(k, &d))
        .collect();
    CheckReport::new("lemma-ineq", json!({ "k_max": k_max }), records, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valsum_examples() {
        assert_eq!(signed_central_sum(6), BigInt::from(14));
        assert_eq!(signed_central_sum(4), BigInt::from(5));
        assert_eq!(signed_central_sum(14), BigInt::from(3002));
        let r = check_lemma_valsum(64);
        assert!(r.passed(), "{}", r.to_text());
        let k14 = r.records.iter().find(|r| r.k == 14).unwrap();
        assert_eq!(k14.computed["binomial_mod4"], "3");
    }

    #[test]
    fn ineq_examples() {
        let r = check_lemma_ineq(64);
        assert!(r.passed(), "{}", r.to_text());
        let k14 = r.records.iter().find(|r| r.k == 14).unwrap();
        assert_eq!(k14.computed["nu_d_ratio"], 2);
        assert_eq!(k14.computed["sharp_pair"], json!([-1, -1]));
        let k8 = r.records.iter().find(|r| r.k == 8).unwrap();
        // 3/57
        assert_eq!(k8.computed["nu_square_ratio"], 0);
    }

    #[test]
    fn square_ratio_at_8() {
        let d = |k| d_coefficient(k).unwrap();
        let c = constants(8).unwrap();
        let q = (d(4) * d(4))
            .scale(&BigInt::from(8))
            .checked_div(&(c.c * c.d * ExactRational::from(2)))
            .unwrap();
        assert_eq!(q, ExactRational::new(3, 57).unwrap());
    }
}
