//! Verification suite: each check recomputes a family of exact statements over
//! a weight range and returns a [`CheckReport`].

mod lemmas;
mod scan;
mod selftest;
mod valuations;

use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::irreducibility::IrreducibilityCertificate;

pub use lemmas::{check_lemma_ineq, check_lemma_valsum};
pub use scan::{
    check_theorem_main, check_theorem_main_on, gekeler_scan, gekeler_scan_on, scan_weight,
    ScanOutcome, DUMAS_PRIME_BOUND, FF_PRIME_COUNT,
};
pub use selftest::{selftest, selftest_with, SelftestConfig};
pub use valuations::{
    check_conjecture, check_conjecture_on, check_min_valuation, check_min_valuation_on,
    check_phi_valuations, check_phi_valuations_on, conjectured_min,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// One checked instance. `computed` and `expected` keep insertion order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub item: Option<String>,
    pub computed: Map<String, Value>,
    pub expected: Map<String, Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn new(k: u32) -> Self {
        Self {
            k,
            item: None,
            computed: Map::new(),
            expected: Map::new(),
            pass: true,
            note: None,
        }
    }

    pub fn item(mut self, item: impl Into<String>) -> Self {
        self.item = Some(item.into());
        self
    }

    pub fn computed(mut self, key: &str, value: impl Serialize) -> Self {
        self.computed
            .insert(key.into(), serde_json::to_value(value).expect("plain data"));
        self
    }

    pub fn expected(mut self, key: &str, value: impl Serialize) -> Self {
        self.expected
            .insert(key.into(), serde_json::to_value(value).expect("plain data"));
        self
    }

    /// Marks the record failed (sticky) and appends `msg` to the note.
    pub fn require(mut self, ok: bool, msg: impl FnOnce() -> String) -> Self {
        if !ok {
            self.pass = false;
            self.add_note(msg());
        }
        self
    }

    pub fn add_note(&mut self, msg: String) {
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {msg}"),
            None => msg,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: Map<String, Value>,
    pub status: Status,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<IrreducibilityCertificate>,
    pub wall_time_ms: u64,
}

impl CheckReport {
    pub(crate) fn new(
        name: &str,
        parameters: Value,
        records: Vec<Record>,
        started: Instant,
    ) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let failed = records.len() - passed;
        let parameters = match parameters {
            Value::Object(map) => map,
            _ => Map::new(),
        };
        Self {
            name: name.into(),
            parameters,
            status: if failed == 0 { Status::Pass } else { Status::Fail },
            summary: Summary {
                total: records.len(),
                passed,
                failed,
            },
            notes: Vec::new(),
            records,
            certificates: Vec::new(),
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub(crate) fn fail_with(mut self, note: String) -> Self {
        self.status = Status::Fail;
        self.notes.push(note);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// JSON without the wall-time field; equal across runs with equal inputs.
    pub fn body_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        if let Value::Object(map) = &mut v {
            map.remove("wall_time_ms");
        }
        v
    }

    /// One row per record: `k`, optional `item`, computed then expected
    /// columns (union of keys in first-seen order), `pass`.
    pub fn to_csv(&self) -> String {
        let mut computed_keys: Vec<&str> = Vec::new();
        let mut expected_keys: Vec<&str> = Vec::new();
        for r in &self.records {
            for key in r.computed.keys() {
                if !computed_keys.contains(&key.as_str()) {
                    computed_keys.push(key);
                }
            }
            for key in r.expected.keys() {
                if !expected_keys.contains(&key.as_str()) {
                    expected_keys.push(key);
                }
            }
        }
        let with_item = self.records.iter().any(|r| r.item.is_some());
        let mut header = vec!["k".to_string()];
        if with_item {
            header.push("item".into());
        }
        header.extend(computed_keys.iter().map(|k| k.to_string()));
        header.extend(expected_keys.iter().map(|k| format!("expected_{k}")));
        header.push("pass".into());
        let mut out = header.join(",");
        out.push('\n');
        for r in &self.records {
            let mut row = vec![r.k.to_string()];
            if with_item {
                row.push(csv_field(&Value::from(r.item.clone().unwrap_or_default())));
            }
            for key in &computed_keys {
                row.push(r.computed.get(*key).map(csv_field).unwrap_or_default());
            }
            for key in &expected_keys {
                row.push(r.expected.get(*key).map(csv_field).unwrap_or_default());
            }
            row.push(r.pass.to_string());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Short human-readable summary plus one line per failing record.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} passed, {} failed of {}) in {} ms\n",
            self.name,
            self.status,
            self.summary.passed,
            self.summary.failed,
            self.summary.total,
            self.wall_time_ms
        );
        for note in &self.notes {
            out.push_str(&format!("  note: {note}\n"));
        }
        for r in self.failures() {
            let item = r.item.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
            out.push_str(&format!(
                "  FAIL k = {}{item}: {}\n",
                r.k,
                r.note.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

fn csv_field(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items
            .iter()
            .map(|x| match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect::<Vec<_>>()
            .join(";"),
        other => other.to_string(),
    };
    if raw.contains(',') || raw.contains('"') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

pub(crate) fn even_weights(from: u32, to: u32) -> Vec<u32> {
    (from..=to).filter(|k| k % 2 == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_and_csv() {
        let records = vec![
            Record::new(4).computed("v", 0).expected("v", 0),
            Record::new(6)
                .computed("v", vec!["1/2", "3"])
                .expected("v", "a,b")
                .require(false, || "mismatch".into()),
        ];
        let report = CheckReport::new("demo", json!({"k_max": 6}), records, Instant::now());
        assert_eq!(report.status, Status::Fail);
        assert_eq!(report.summary.failed, 1);
        let csv = report.to_csv();
        assert_eq!(csv, "k,v,expected_v,pass\n4,0,0,true\n6,1/2;3,\"a,b\",false\n");
        assert!(report.to_text().contains("FAIL k = 6: mismatch"));
        assert!(report.body_json().get("wall_time_ms").is_none());
    }
}
