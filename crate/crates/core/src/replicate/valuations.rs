//! 2-adic valuations of the table coefficients `w_{a,k}` and of the
//! coefficients `t_{k,r}` of `φ_k` for `k = 12·2^ℓ`.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::{even_weights, CheckReport, Record};
use crate::eisenstein::{min_valuation2, EisensteinTable, Recurrence};
use crate::exact::{digit_sum_base2, valuation_unchecked, Valuation};
use crate::gekeler::{phi_by_division, phi_closed_form, valuation_profile};

pub(crate) fn build_table(name: &str, k_max: u32, started: Instant) -> Result<EisensteinTable, CheckReport> {
    EisensteinTable::build(k_max.max(6), Recurrence::Rademacher).map_err(|e| {
        CheckReport::new(name, json!({ "k_max": k_max }), Vec::new(), started)
            .fail_with(format!("table build failed: {e}"))
    })
}

fn table_record(k: u32, table: &EisensteinTable, f: impl FnOnce(Record, Valuation) -> Record) -> Record {
    match table.get(k) {
        Ok(w) => f(Record::new(k), min_valuation2(w)),
        Err(e) => Record::new(k).require(false, || e.to_string()),
    }
}

/// `min_a ν_2(w_{a,k}) >= 0` for even `4 <= k <= k_max`.
pub fn check_min_valuation(k_max: u32) -> CheckReport {
    let started = Instant::now();
    match build_table("min-valuation", k_max, started) {
        Ok(table) => check_min_valuation_on(&table, k_max, started),
        Err(report) => report,
    }
}

pub fn check_min_valuation_on(table: &EisensteinTable, k_max: u32, started: Instant) -> CheckReport {
    let records = even_weights(4, k_max)
        .into_par_iter()
        .map(|k| {
            table_record(k, table, |rec, v| {
                rec.computed("min_valuation", v)
                    .expected("min_valuation_at_least", 0)
                    .require(v >= Valuation::Finite(0), || format!("min nu_2 = {v}"))
            })
        })
        .collect();
    CheckReport::new("min-valuation", json!({ "k_max": k_max }), records, started)
}

/// Predicted `min_a ν_2(w_{a,k})`: 0 for `k = 2^j`, else `s_2(k) − 2`.
pub fn conjectured_min(k: u32) -> (i64, &'static str) {
    if k.is_power_of_two() {
        (0, "power-of-two")
    } else {
        (i64::from(digit_sum_base2(u64::from(k))) - 2, "generic")
    }
}

/// Per-k comparison of `min_a ν_2(w_{a,k})` with [`conjectured_min`].
pub fn check_conjecture(k_max: u32) -> CheckReport {
    let started = Instant::now();
    match build_table("conjecture", k_max, started) {
        Ok(table) => check_conjecture_on(&table, k_max, started),
        Err(report) => report,
    }
}

pub fn check_conjecture_on(table: &EisensteinTable, k_max: u32, started: Instant) -> CheckReport {
    let records = even_weights(4, k_max)
        .into_par_iter()
        .map(|k| {
            let (predicted, branch) = conjectured_min(k);
            table_record(k, table, |rec, v| {
                rec.computed("s2", digit_sum_base2(u64::from(k)))
                    .computed("min_valuation", v)
                    .expected("branch", branch)
                    .expected("min_valuation", predicted)
                    .require(v == Valuation::Finite(predicted), || {
                        format!("min nu_2 = {v}, predicted {predicted}")
                    })
            })
        })
        .collect();
    CheckReport::new("conjecture", json!({ "k_max": k_max }), records, started)
}

/// For `k = 12·2^ℓ`, `0 <= ℓ <= ell_max`:
/// `ν_2(w_{0,k}) = 0`, `ν_2(w_{3a,k}) >= 1` for `1 <= a <= k/12 − 1`,
/// `ν_2(t_{k,0}) = (2k−3)/3`, `ν_2(t_{k,r}) >= 2k/3 − 8r` for `1 <= r <= k/12 − 1`.
pub fn check_phi_valuations(ell_max: u32) -> CheckReport {
    let started = Instant::now();
    let k_top = 12 << ell_max;
    match build_table("phi-valuations", k_top, started) {
        Ok(table) => check_phi_valuations_on(&table, ell_max, started),
        Err(report) => report,
    }
}

pub fn check_phi_valuations_on(table: &EisensteinTable, ell_max: u32, started: Instant) -> CheckReport {
    let records = (0..=ell_max)
        .into_par_iter()
        .map(|ell| phi_valuation_record(table, ell))
        .collect();
    CheckReport::new("phi-valuations", json!({ "ell_max": ell_max }), records, started)
}

fn phi_valuation_record(table: &EisensteinTable, ell: u32) -> Record {
    let k = 12u32 << ell;
    let m = k / 12;
    let two_k_3 = i64::from(2 * k / 3);
    let rec = Record::new(k).computed("ell", ell);
    let (w, phi) = match (table.get(k), phi_closed_form(k, table)) {
        (Ok(w), Ok(phi)) => (w, phi),
        (Err(e), _) | (_, Err(e)) => return rec.require(false, || e.to_string()),
    };
    let nu_w: Vec<Valuation> = (0..m)
        .map(|a| {
            w.get(3 * a)
                .map_or(Valuation::Infinity, |c| valuation_unchecked(c, 2))
        })
        .collect();
    let profile = match valuation_profile(&phi, 2) {
        Ok(p) => p,
        Err(e) => return rec.require(false, || e.to_string()),
    };
    let route_ok = phi_by_division(k, table).is_ok_and(|p| p == phi);
    let mut rec = rec
        .computed("nu_w", &nu_w)
        .computed("nu_t", &profile)
        .expected("nu_w0", 0)
        .expected("nu_w_rest_at_least", 1)
        .expected("nu_t0", two_k_3 - 1)
        .expected("nu_t_bound", (1..m).map(|r| two_k_3 - 8 * i64::from(r)).collect::<Vec<_>>())
        .require(route_ok, || "closed form and division disagree".into())
        .require(nu_w[0] == Valuation::Finite(0), || format!("nu(w_0) = {}", nu_w[0]))
        .require(profile[0] == Valuation::Finite(two_k_3 - 1), || {
            format!("nu(t_0) = {}", profile[0])
        });
    for (a, v) in nu_w.iter().enumerate().skip(1) {
        rec = rec.require(*v >= Valuation::Finite(1), || format!("nu(w_{}) = {v}", 3 * a));
    }
    for (r, v) in profile.iter().enumerate().skip(1) {
        let bound = two_k_3 - 8 * r as i64;
        rec = rec.require(*v >= Valuation::Finite(bound), || {
            format!("nu(t_{r}) = {v} < {bound}")
        });
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges_pass() {
        let r = check_min_valuation(60);
        assert!(r.passed(), "{}", r.to_text());
        let r = check_conjecture(60);
        assert!(r.passed(), "{}", r.to_text());
        let k16 = r.records.iter().find(|r| r.k == 16).unwrap();
        assert_eq!(k16.expected["branch"], "power-of-two");
        assert_eq!(k16.computed["min_valuation"], 0);
    }

    #[test]
    fn conjecture_csv_columns() {
        let csv = check_conjecture(12).to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "k,s2,min_valuation,expected_branch,expected_min_valuation,pass"
        );
        assert!(csv.contains("\n12,2,0,generic,0,true\n"));
    }

    #[test]
    fn phi_valuations_small() {
        let r = check_phi_valuations(2);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.records[0].computed["nu_t"], json!([7]));
        assert_eq!(r.records[1].computed["nu_t"][0], 15);
    }
}
