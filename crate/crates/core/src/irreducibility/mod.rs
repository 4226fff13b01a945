//! Irreducibility certificates for monic rational polynomials: the Dumas
//! criterion, Newton polygons, and a finite-field degree-pattern oracle.

mod dumas;
pub mod finite_field;
mod newton;
mod oracle;
mod verify;

use serde::{Deserialize, Serialize};

use crate::exact::Valuation;
use crate::poly::RationalPoly;

pub use dumas::dumas_check;
pub use newton::{newton_polygon, NewtonPolygon, Segment};
pub use oracle::{
    finite_field_auto, finite_field_degree_patterns, subset_sums, DEFAULT_ORACLE_PRIMES,
};
pub use verify::verify_certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Irreducible,
    Inconclusive,
    Reducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Dumas,
    FiniteFieldPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRef {
    pub label: String,
    pub degree: usize,
    /// `num/den` strings, constant term first.
    pub coefficients: Vec<String>,
}

impl PolyRef {
    pub fn new(label: impl Into<String>, f: &RationalPoly) -> Self {
        Self {
            label: label.into(),
            degree: f.degree().unwrap_or(0),
            coefficients: f.coeffs().iter().map(|c| c.to_ratio_string()).collect(),
        }
    }
}

/// Factor degrees of `f mod p`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePattern {
    pub prime: u64,
    pub degrees: Vec<usize>,
}

/// A prime passed over by the oracle and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPrime {
    pub prime: u64,
    pub reason: String,
}

/// Serialized field order is fixed: `poly, prime, valuations, slope_num,
/// slope_den, gcd, verdict, criterion`, then oracle witness fields.
///
/// For Dumas certificates `slope_num/slope_den = −ν_p(a_0)/n` is the chord
/// slope (unreduced) and `gcd = gcd(ν_p(a_0), n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCertificate {
    pub poly: PolyRef,
    pub prime: Option<u64>,
    pub valuations: Vec<Valuation>,
    pub slope_num: Option<i64>,
    pub slope_den: Option<i64>,
    pub gcd: Option<i64>,
    pub verdict: Verdict,
    pub criterion: Criterion,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<DegreePattern>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped_primes: Vec<SkippedPrime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl IrreducibilityCertificate {
    pub fn is_irreducible(&self) -> bool {
        self.verdict == Verdict::Irreducible
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.poly.label = label.into();
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}
