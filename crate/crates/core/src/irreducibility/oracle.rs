use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::finite_field::{distinct_degree_pattern, FpPoly};
use super::{
    Criterion, DegreePattern, IrreducibilityCertificate, PolyRef, SkippedPrime, Verdict,
};
use crate::error::{Error, Result};
use crate::exact::is_prime;
use crate::poly::RationalPoly;

/// Number of usable primes collected by [`finite_field_auto`].
pub const DEFAULT_ORACLE_PRIMES: usize = 10;

/// All sums of sub-multisets of `degrees`.
pub fn subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let total: usize = degrees.iter().sum();
    let mut reachable = vec![false; total + 1];
    reachable[0] = true;
    for &d in degrees {
        for s in (d..=total).rev() {
            if reachable[s - d] {
                reachable[s] = true;
            }
        }
    }
    (0..=total).filter(|&s| reachable[s]).collect()
}

/// Proper factor degrees `1..n−1` compatible with every pattern.
pub(crate) fn compatible_degrees(n: usize, patterns: &[DegreePattern]) -> BTreeSet<usize> {
    let mut candidates: BTreeSet<usize> = (1..n).collect();
    for pat in patterns {
        let sums = subset_sums(&pat.degrees);
        candidates.retain(|d| sums.contains(d));
    }
    candidates
}

/// Reduction of `coeffs` at `p`, or the reason it is unusable.
fn usable_reduction(coeffs: &[BigInt], p: u64) -> std::result::Result<FpPoly, String> {
    let lead = coeffs.last().expect("nonzero polynomial");
    if (lead % BigInt::from(p)).is_zero() {
        return Err("divides leading coefficient".into());
    }
    let f = FpPoly::from_integers(p, coeffs);
    if !f.is_squarefree() {
        return Err("reduction not squarefree".into());
    }
    Ok(f)
}

fn primitive_integer(f: &RationalPoly) -> Result<Vec<BigInt>> {
    match f.degree() {
        Some(n) if n >= 1 => Ok(f.to_primitive_integer()),
        _ => Err(Error::InvalidPolynomial(format!(
            "expected degree >= 1, got {f}"
        ))),
    }
}

fn certificate(
    f: &RationalPoly,
    n: usize,
    patterns: Vec<DegreePattern>,
    skipped_primes: Vec<SkippedPrime>,
) -> IrreducibilityCertificate {
    let (verdict, reason) = if patterns.is_empty() {
        (Verdict::Inconclusive, Some("no usable prime".to_string()))
    } else {
        let open = compatible_degrees(n, &patterns);
        if open.is_empty() {
            (Verdict::Irreducible, None)
        } else {
            let list: Vec<String> = open.iter().map(|d| d.to_string()).collect();
            (
                Verdict::Inconclusive,
                Some(format!("factor degrees not excluded: {}", list.join(","))),
            )
        }
    };
    IrreducibilityCertificate {
        poly: PolyRef::new(f.to_string(), f),
        prime: None,
        valuations: Vec::new(),
        slope_num: None,
        slope_den: None,
        gcd: None,
        verdict,
        criterion: Criterion::FiniteFieldPattern,
        patterns,
        skipped_primes,
        reason,
    }
}

/// Degree patterns of `f` (denominators cleared, made primitive) modulo each
/// listed prime. Primes dividing the leading coefficient or giving a
/// non-squarefree reduction are skipped and recorded.
pub fn finite_field_degree_patterns(
    f: &RationalPoly,
    primes: &[u64],
) -> Result<IrreducibilityCertificate> {
    let coeffs = primitive_integer(f)?;
    let n = coeffs.len() - 1;
    let mut patterns = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p as i64));
        }
        match usable_reduction(&coeffs, p) {
            Ok(fp) => patterns.push(DegreePattern {
                prime: p,
                degrees: distinct_degree_pattern(&fp),
            }),
            Err(reason) => skipped.push(SkippedPrime { prime: p, reason }),
        }
    }
    Ok(certificate(f, n, patterns, skipped))
}

/// Width of the search window in [`finite_field_auto`]; exhausted only when
/// `f` has a repeated factor over `Q`.
const PRIME_SEARCH_LIMIT: u64 = 10_000;

/// [`finite_field_degree_patterns`] over the first `count` usable primes
/// `p >= min_prime`.
pub fn finite_field_auto(
    f: &RationalPoly,
    count: usize,
    min_prime: u64,
) -> Result<IrreducibilityCertificate> {
    let coeffs = primitive_integer(f)?;
    let n = coeffs.len() - 1;
    let mut patterns = Vec::new();
    let mut skipped = Vec::new();
    let limit = min_prime.max(2) + PRIME_SEARCH_LIMIT;
    let mut p = min_prime.max(2) - 1;
    while patterns.len() < count && p < limit {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        match usable_reduction(&coeffs, p) {
            Ok(fp) => patterns.push(DegreePattern {
                prime: p,
                degrees: distinct_degree_pattern(&fp),
            }),
            Err(reason) => skipped.push(SkippedPrime { prime: p, reason }),
        }
    }
    Ok(certificate(f, n, patterns, skipped))
}
