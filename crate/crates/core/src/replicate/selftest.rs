//! Consolidated cross-checks of the table and of `φ_k`.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::{CheckReport, Record};
use crate::eisenstein::{q_expansion_direct, EisensteinTable, Recurrence};
use crate::error::Result;
use crate::gekeler::{phi_by_division, phi_closed_form};
use crate::qmring::substitute_q_expansion;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    /// Popa and Rademacher tables compared for `8 <= k <= recurrence_k_max`.
    pub recurrence_k_max: u32,
    /// q-expansions compared for `4 <= k <= q_k_max`.
    pub q_k_max: u32,
    pub q_terms: usize,
    /// Both `φ_k` routes compared for `k ≡ 0 (mod 12)`, `k <= phi_k_max`.
    pub phi_k_max: u32,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            recurrence_k_max: 200,
            q_k_max: 60,
            q_terms: 30,
            phi_k_max: 480,
        }
    }
}

impl SelftestConfig {
    pub fn table_k_max(&self) -> u32 {
        self.recurrence_k_max.max(self.q_k_max).max(self.phi_k_max)
    }
}

/// [`selftest_with`] on a fresh Rademacher table and the default ranges.
pub fn selftest() -> CheckReport {
    let config = SelftestConfig::default();
    let started = Instant::now();
    match EisensteinTable::build(config.table_k_max(), Recurrence::Rademacher) {
        Ok(table) => selftest_with(&table, &config, started),
        Err(e) => CheckReport::new("selftest", params(&config), Vec::new(), started)
            .fail_with(format!("table build failed: {e}")),
    }
}

fn params(config: &SelftestConfig) -> serde_json::Value {
    json!({
        "recurrence_k_max": config.recurrence_k_max,
        "q_k_max": config.q_k_max,
        "q_terms": config.q_terms,
        "phi_k_max": config.phi_k_max,
    })
}

fn error_record(k: u32, item: &str, e: impl ToString) -> Record {
    Record::new(k).item(item).require(false, || e.to_string())
}

fn recurrence_records(table: &EisensteinTable, k_max: u32) -> Vec<Record> {
    let popa = match EisensteinTable::build(k_max, Recurrence::Popa) {
        Ok(t) => t,
        Err(e) => return vec![error_record(8, "dual-recurrence", e)],
    };
    (8..=k_max)
        .step_by(2)
        .map(|k| match (table.get(k), popa.get(k)) {
            (Ok(a), Ok(b)) => Record::new(k)
                .item("dual-recurrence")
                .computed("terms", a.len())
                .require(a == b, || "table entry differs from the Popa expansion".into()),
            (Err(e), _) | (_, Err(e)) => error_record(k, "dual-recurrence", e),
        })
        .collect()
}

fn q_record(table: &EisensteinTable, k: u32, n_terms: usize) -> Record {
    let check = || -> Result<bool> {
        let lhs = substitute_q_expansion(&table.get(k)?.to_e_form()?, n_terms);
        Ok(lhs == q_expansion_direct(k, n_terms)?)
    };
    match check() {
        Ok(same) => Record::new(k)
            .item("q-oracle")
            .computed("terms", n_terms)
            .require(same, || "q-expansion differs from the divisor sums".into()),
        Err(e) => error_record(k, "q-oracle", e),
    }
}

fn phi_record(table: &EisensteinTable, k: u32) -> Record {
    match (phi_closed_form(k, table), phi_by_division(k, table)) {
        (Ok(a), Ok(b)) => Record::new(k)
            .item("phi-routes")
            .computed("degree", a.degree())
            .require(a == b, || "closed form and division disagree".into()),
        (Err(e), _) | (_, Err(e)) => error_record(k, "phi-routes", e),
    }
}

/// Runs the three cross-checks against `table`. Any failure makes the report
/// FAIL and names the first divergent weight in the notes.
pub fn selftest_with(table: &EisensteinTable, config: &SelftestConfig, started: Instant) -> CheckReport {
    let mut records = recurrence_records(table, config.recurrence_k_max);
    records.extend(
        (4..=config.q_k_max)
            .step_by(2)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| q_record(table, k, config.q_terms))
            .collect::<Vec<_>>(),
    );
    records.extend(
        (12..=config.phi_k_max)
            .step_by(12)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| phi_record(table, k))
            .collect::<Vec<_>>(),
    );
    let first_bad = records.iter().filter(|r| !r.pass).map(|r| r.k).min();
    let mut report = CheckReport::new("selftest", params(config), records, started);
    if let Some(k) = first_bad {
        report.notes.push(format!("first divergent k = {k}"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::{Provenance, WVector};
    use crate::exact::ExactRational;

    fn small() -> SelftestConfig {
        SelftestConfig {
            recurrence_k_max: 40,
            q_k_max: 24,
            q_terms: 10,
            phi_k_max: 48,
        }
    }

    #[test]
    fn clean_table_passes() {
        let c = small();
        let t = EisensteinTable::build(c.table_k_max(), Recurrence::Rademacher).unwrap();
        let r = selftest_with(&t, &c, Instant::now());
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.notes.is_empty());
    }

    #[test]
    fn fault_injection_names_first_divergent_weight() {
        let c = small();
        let mut t = EisensteinTable::build(c.table_k_max(), Recurrence::Rademacher).unwrap();
        let w = t.get(20).unwrap();
        let mut coeffs = w.coeffs().to_vec();
        coeffs[0] = &coeffs[0] + &ExactRational::new(1, 3).unwrap();
        t.replace_unchecked(WVector::new(20, coeffs).unwrap(), Provenance::Imported);
        let r = selftest_with(&t, &c, Instant::now());
        assert!(!r.passed());
        assert_eq!(r.notes, vec!["first divergent k = 20".to_string()]);
    }

    #[test]
    fn deterministic_body() {
        let c = small();
        let t = EisensteinTable::build(c.table_k_max(), Recurrence::Rademacher).unwrap();
        let a = selftest_with(&t, &c, Instant::now());
        let b = selftest_with(&t, &c, Instant::now());
        assert_eq!(a.body_json(), b.body_json());
    }
}
