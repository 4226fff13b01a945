//! Expansions `G_k = Σ_{4a+6b=k} w_{a,k} G_4^a G_6^b` of the Eisenstein series
//! `G_k = 2ζ(k) E_k`.
//!
//! Two independent recurrences fill the same [`EisensteinTable`]:
//!
//! * [`rademacher_expand`]: the convolution
//!   `(k/2−3)(k−1)(k+1) G_k = 3 Σ_{p=2}^{k/2−2} (2p−1)(k−2p−1) G_{2p} G_{k−2p}`.
//!   This is the production path.
//! * [`popa_expand`]: a relation in the quasimodular ring that involves `G_2`
//!   and the derivative of `G_{k−2}`; the `G_2` terms must cancel exactly.
//!
//! Both work in the π-free G-normalization of [`crate::qmring`], where the
//! generators are `G_4/π^4` and `G_6/π^6`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{
    binomial, factorial, valuation_unchecked, zeta_ratio, CommonDenominator, ExactRational,
    Valuation,
};
use crate::qmring::{GradedForm, Monomial};
use crate::series::{eisenstein_series, QSeries};

/// Smallest admissible `a` for weight `k`: `4a ≡ k (mod 6)` forces `a ≡ k (mod 3)`.
fn first_index(k: u32) -> u32 {
    k % 3
}

fn index_count(k: u32) -> usize {
    let a0 = first_index(k);
    if 4 * a0 > k {
        0
    } else {
        ((k / 4 - a0) / 3 + 1) as usize
    }
}

/// Coefficients `w_{a,k}` for every `a` with `4a + 6b = k`, in increasing `a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WVector {
    weight: u32,
    coeffs: Vec<ExactRational>,
}

impl WVector {
    pub fn new(weight: u32, coeffs: Vec<ExactRational>) -> Result<Self> {
        if weight % 2 == 1 || coeffs.len() != index_count(weight) {
            return Err(Error::Consistency(format!(
                "weight {weight} takes {} coefficients, got {}",
                index_count(weight),
                coeffs.len()
            )));
        }
        Ok(Self { weight, coeffs })
    }

    pub fn weight(&self) -> u32 {
        self.weight
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

    /// `(a, b, w_{a,k})` triples in increasing `a`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &ExactRational)> + '_ {
        let a0 = first_index(self.weight);
        self.coeffs.iter().enumerate().map(move |(i, w)| {
            let a = a0 + 3 * i as u32;
            (a, (self.weight - 4 * a) / 6, w)
        })
    }

    /// `w_{a,k}`, or `None` when `4a + 6b = k` has no solution.
    pub fn get(&self, a: u32) -> Option<&ExactRational> {
        let a0 = first_index(self.weight);
        if a < a0 || (a - a0) % 3 != 0 {
            return None;
        }
        self.coeffs.get(((a - a0) / 3) as usize)
    }

    /// The expansion as a form in the G-normalization.
    pub fn to_form(&self) -> GradedForm {
        GradedForm::from_terms(
            self.weight,
            self.iter().map(|(a, b, w)| (Monomial::new(0, a, b), w.clone())),
        )
        .expect("indices are homogeneous")
    }

    /// Reads back a classical (E2-free) form; any `E2` content is an error.
    pub fn from_form(f: &GradedForm) -> Result<Self> {
        if f.has_e2() {
            return Err(Error::Consistency(format!(
                "weight {} form has nonzero E2 part {}",
                f.weight(),
                f.e2_part()
            )));
        }
        let k = f.weight();
        let a0 = first_index(k);
        let coeffs = (0..index_count(k))
            .map(|i| {
                let a = a0 + 3 * i as u32;
                f.coeff(Monomial::new(0, a, (k - 4 * a) / 6))
            })
            .collect();
        Self::new(k, coeffs)
    }

    /// `E_k` over `E4, E6`: `E_k = (1/r_k) Σ w_{a,k} r_4^a r_6^b E_4^a E_6^b`.
    pub fn to_e_form(&self) -> Result<GradedForm> {
        let r_k = zeta_ratio(self.weight)?;
        Ok(self.to_form().to_e_basis().scale(&r_k.recip()?))
    }
}

impl fmt::Display for WVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(a, b, w)| format!("w[a={a},b={b}] = {w}"))
            .collect();
        write!(f, "G_{}: {}", self.weight, parts.join(", "))
    }
}

/// `min_a ν_2(w_{a,k})`; `Infinity` only if every coefficient vanishes.
pub fn min_valuation2(w: &WVector) -> Valuation {
    w.coeffs
        .iter()
        .map(|c| valuation_unchecked(c, 2))
        .min()
        .unwrap_or(Valuation::Infinity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Popa,
    Rademacher,
    /// The generators `G_4`, `G_6` themselves.
    ClosedForm,
    /// Read from a table dump.
    Imported,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Popa => "popa",
            Provenance::Rademacher => "rademacher",
            Provenance::ClosedForm => "closed-form",
            Provenance::Imported => "imported",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recurrence {
    Popa,
    Rademacher,
}

#[derive(Clone, Debug)]
struct TableEntry {
    w: WVector,
    provenance: Provenance,
    integral: CommonDenominator,
}

impl TableEntry {
    fn new(w: WVector, provenance: Provenance) -> Self {
        let integral = CommonDenominator::from_rationals(w.coeffs());
        Self {
            w,
            provenance,
            integral,
        }
    }
}

/// Memoized `k → w(k)`, filled bottom-up from the generators.
///
/// Built by a single writer, then shared read-only (`&EisensteinTable` is
/// `Sync`) by the per-weight analyses.
#[derive(Clone, Debug)]
pub struct EisensteinTable {
    entries: BTreeMap<u32, TableEntry>,
}

impl Default for EisensteinTable {
    fn default() -> Self {
        Self::new()
    }
}

impl EisensteinTable {
    /// Table holding only `w(4) = {1}` and `w(6) = {1}`.
    pub fn new() -> Self {
        let mut entries = BTreeMap::new();
        for k in [4, 6] {
            let w = WVector::new(k, vec![ExactRational::one()]).expect("generator");
            entries.insert(k, TableEntry::new(w, Provenance::ClosedForm));
        }
        Self { entries }
    }

    pub fn build(k_max: u32, recurrence: Recurrence) -> Result<Self> {
        let mut table = Self::new();
        table.extend_to(k_max, recurrence)?;
        Ok(table)
    }

    /// Fills every missing even weight up to `k_max` in increasing order.
    pub fn extend_to(&mut self, k_max: u32, recurrence: Recurrence) -> Result<()> {
        for k in (8..=k_max).step_by(2) {
            if self.entries.contains_key(&k) {
                continue;
            }
            let (w, provenance) = match recurrence {
                Recurrence::Popa => (popa_expand(k, self)?, Provenance::Popa),
                Recurrence::Rademacher => (rademacher_expand_paired(k, self)?, Provenance::Rademacher),
            };
            self.entries.insert(k, TableEntry::new(w, provenance));
        }
        Ok(())
    }

    pub fn get(&self, k: u32) -> Result<&WVector> {
        self.entries
            .get(&k)
            .map(|e| &e.w)
            .ok_or(Error::MissingWeight(k))
    }

    pub fn provenance(&self, k: u32) -> Option<Provenance> {
        self.entries.get(&k).map(|e| e.provenance)
    }

    fn integral(&self, k: u32) -> Result<&CommonDenominator> {
        self.entries
            .get(&k)
            .map(|e| &e.integral)
            .ok_or(Error::MissingWeight(k))
    }

    pub fn contains(&self, k: u32) -> bool {
        self.entries.contains_key(&k)
    }

    pub fn max_weight(&self) -> u32 {
        *self.entries.keys().next_back().expect("generators always present")
    }

    pub fn weights(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    /// Overwrites an entry without any check. Later entries are not recomputed.
    pub fn replace_unchecked(&mut self, w: WVector, provenance: Provenance) {
        self.entries.insert(w.weight(), TableEntry::new(w, provenance));
    }

    /// CSV dump: header `k,a,b,w` then one row per coefficient, `w` as `num/den`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,a,b,w")?;
        for (k, entry) in &self.entries {
            for (a, b, w) in entry.w.iter() {
                writeln!(out, "{k},{a},{b},{}", w.to_ratio_string())?;
            }
        }
        Ok(())
    }

    /// Reads a [`EisensteinTable::write_csv`] dump. Every weight present must
    /// list its full index range; the generator entries must be `{1}`.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut rows: BTreeMap<u32, Vec<(u32, ExactRational)>> = BTreeMap::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('k')) {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: `{line}`", lineno + 1));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(bad());
            }
            let k: u32 = fields[0].trim().parse().map_err(|_| bad())?;
            let a: u32 = fields[1].trim().parse().map_err(|_| bad())?;
            let b: u32 = fields[2].trim().parse().map_err(|_| bad())?;
            if 4 * a + 6 * b != k {
                return Err(bad());
            }
            rows.entry(k).or_default().push((a, fields[3].parse()?));
        }
        let mut table = Self::new();
        for (k, mut list) in rows {
            list.sort_by_key(|(a, _)| *a);
            let a0 = first_index(k);
            let ok = list.len() == index_count(k)
                && list.iter().enumerate().all(|(i, (a, _))| *a == a0 + 3 * i as u32);
            if !ok {
                return Err(Error::Parse(format!("weight {k}: incomplete coefficient list")));
            }
            let w = WVector::new(k, list.into_iter().map(|(_, c)| c).collect())?;
            if k == 4 || k == 6 {
                if w.coeffs() != [ExactRational::one()] {
                    return Err(Error::Parse(format!("weight {k}: generator must be 1")));
                }
                continue;
            }
            table.entries.insert(k, TableEntry::new(w, Provenance::Imported));
        }
        Ok(table)
    }
}

/// `c_k` and `d_k` of the Popa recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceConstants {
    pub c: ExactRational,
    pub d: ExactRational,
}

fn sign_half(k: u32) -> i64 {
    if (k / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `d_k = (−1)^{k/2} (k−1)! / 2^{k+1}` for even `k >= 2`.
pub fn d_coefficient(k: u32) -> Result<ExactRational> {
    if k < 2 || k % 2 == 1 {
        return Err(domain("d_k", k, "even k >= 2"));
    }
    ExactRational::new(
        factorial(u64::from(k) - 1) * sign_half(k),
        BigInt::one() << (k + 1),
    )
}

/// `d_2 = −1/8`.
pub fn d2() -> ExactRational {
    ExactRational::new(-1, 8).expect("nonzero")
}

/// `c_k = k/(2(k/2+1)(k/2−1)) + (−1)^{k/2} (k/2)!(k/2−2)!/(2(k−1)!)`, `d_k`.
pub fn constants(k: u32) -> Result<RecurrenceConstants> {
    if k < 4 || k % 2 == 1 {
        return Err(domain("recurrence constants", k, "even k >= 4"));
    }
    let h = u64::from(k / 2);
    let first = ExactRational::new(i64::from(k), 2 * (h as i64 + 1) * (h as i64 - 1))?;
    let second = ExactRational::new(
        factorial(h) * factorial(h - 2) * sign_half(k),
        factorial(u64::from(k) - 1) * 2,
    )?;
    let c = first + second;
    if c.is_zero() {
        return Err(Error::Consistency(format!("c_{k} vanishes")));
    }
    Ok(RecurrenceConstants {
        c,
        d: d_coefficient(k)?,
    })
}

fn require_recurrence_weight(what: &'static str, k: u32) -> Result<()> {
    if k < 8 || k % 2 == 1 {
        return Err(domain(what, k, "even k >= 8"));
    }
    Ok(())
}

/// `w(k)` from the Popa relation
///
/// ```text
/// c_k d_k G_k = Σ_{j=3, j odd}^{k/2−2} (C(k/2,j) + C(k/2−2,j)) d_{j+1} d_{k−j−1} G_{j+1} G_{k−j−1}
///             + (k−2) d_2 d_{k−2} G_2 G_{k−2} + (π² d_{k−2}/2) G_{k−2}'
///             + (k/2) d_{k/2}² G_{k/2}²        (only when k/2 is even)
/// ```
///
/// evaluated in the quasimodular ring. The `G_2` content of the right-hand
/// side must vanish; a residue is reported as a consistency failure.
pub fn popa_expand(k: u32, table: &EisensteinTable) -> Result<WVector> {
    require_recurrence_weight("popa_expand", k)?;
    Ok(popa_rhs(k, table)?.1)
}

/// Right-hand side of the Popa relation before division by `c_k d_k`, and the
/// resulting expansion.
fn popa_rhs(k: u32, table: &EisensteinTable) -> Result<(GradedForm, WVector)> {
    let half = k / 2;
    let RecurrenceConstants { c, d } = constants(k)?;
    let mut rhs = GradedForm::zero(k);

    for j in (3..=half.saturating_sub(2)).step_by(2) {
        let binoms = binomial(u64::from(half), i64::from(j))
            + binomial(u64::from(half - 2), i64::from(j));
        let coeff = d_coefficient(j + 1)? * d_coefficient(k - j - 1)?;
        let product = table
            .get(j + 1)?
            .to_form()
            .mul(&table.get(k - j - 1)?.to_form());
        rhs = rhs.add(&product.scale(&coeff.scale(&binoms)))?;
    }

    let g_prev = table.get(k - 2)?.to_form();
    let d_prev = d_coefficient(k - 2)?;
    let g2_term = GradedForm::e2()
        .mul(&g_prev)
        .scale(&(d2() * &d_prev).scale(&BigInt::from(k - 2)));
    let half_d_prev = d_prev.checked_div(&ExactRational::from(2))?;
    let derivative_term = g_prev.derivative().scale(&half_d_prev);
    rhs = rhs.add(&g2_term)?.add(&derivative_term)?;

    if half % 2 == 0 {
        let d_half = d_coefficient(half)?;
        let g_half = table.get(half)?.to_form();
        let coeff = (&d_half * &d_half).scale(&BigInt::from(half));
        rhs = rhs.add(&g_half.mul(&g_half).scale(&coeff))?;
    }

    if rhs.has_e2() {
        return Err(Error::Consistency(format!(
            "popa_expand({k}): G2 terms do not cancel, residue {}",
            rhs.e2_part()
        )));
    }
    let w = WVector::from_form(&rhs.scale(&(c * d).recip()?))?;
    Ok((rhs, w))
}

/// Integer coefficient `3(2p−1)(k−2p−1)` of `G_{2p} G_{k−2p}`.
fn rademacher_coefficient(k: u32, p: u32) -> BigInt {
    BigInt::from(3) * (2 * p - 1) * (k - 2 * p - 1)
}

fn rademacher_divisor(k: u32) -> BigInt {
    BigInt::from(k / 2 - 3) * (k - 1) * (k + 1)
}

/// `w(k)` from `(k/2−3)(k−1)(k+1) G_k = 3 Σ_{p=2}^{k/2−2} (2p−1)(k−2p−1) G_{2p} G_{k−2p}`,
/// summing every `p` in order.
pub fn rademacher_expand(k: u32, table: &EisensteinTable) -> Result<WVector> {
    require_recurrence_weight("rademacher_expand", k)?;
    let terms = (2..=k / 2 - 2).map(|p| (rademacher_coefficient(k, p), 2 * p, k - 2 * p));
    convolution_sum(k, terms, table, &rademacher_divisor(k))
}

/// Same recurrence with the terms `p` and `k/2 − p` paired: the lower half
/// is doubled and the middle square `(k/2−1)² G_{k/2}²` (present when
/// `k ≡ 0 mod 4`) is added once.
pub fn rademacher_expand_paired(k: u32, table: &EisensteinTable) -> Result<WVector> {
    require_recurrence_weight("rademacher_expand", k)?;
    let half = k / 2;
    let mut terms: Vec<(BigInt, u32, u32)> = (2..)
        .take_while(|p| 2 * p < half)
        .map(|p| (rademacher_coefficient(k, p) * 2, 2 * p, k - 2 * p))
        .collect();
    if half % 2 == 0 {
        terms.push((rademacher_coefficient(k, half / 2), half, half));
    }
    convolution_sum(k, terms.into_iter(), table, &rademacher_divisor(k))
}

/// `Σ coeff · G_{m1} G_{m2} / divisor`, done on integer numerators over a
/// single common denominator.
fn convolution_sum<I>(k: u32, terms: I, table: &EisensteinTable, divisor: &BigInt) -> Result<WVector>
where
    I: Iterator<Item = (BigInt, u32, u32)>,
{
    let mut parts = Vec::new();
    for (coeff, m1, m2) in terms {
        parts.push((coeff, table.integral(m1)?, m1, table.integral(m2)?, m2));
    }
    let common = parts
        .iter()
        .fold(BigInt::one(), |acc, (_, x, _, y, _)| acc.lcm(&(&x.denominator * &y.denominator)));

    let len = index_count(k);
    let mut acc = vec![BigInt::zero(); len];
    for (coeff, x, m1, y, m2) in &parts {
        let offset = ((first_index(*m1) + first_index(*m2) - first_index(k)) / 3) as usize;
        let mut conv = vec![BigInt::zero(); len];
        for (i, xi) in x.numerators.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.numerators.iter().enumerate() {
                conv[offset + i + j] += xi * yj;
            }
        }
        let scale = coeff * (&common / (&x.denominator * &y.denominator));
        for (a, c) in acc.iter_mut().zip(conv) {
            *a += c * &scale;
        }
    }
    let den = common * divisor;
    let coeffs = acc
        .into_iter()
        .map(|n| ExactRational::new(n, den.clone()))
        .collect::<Result<_>>()?;
    WVector::new(k, coeffs)
}

/// `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n` by divisor enumeration.
pub fn q_expansion_direct(k: u32, n_terms: usize) -> Result<QSeries> {
    if k < 4 || k % 2 == 1 {
        return Err(domain("q_expansion_direct", k, "even k >= 4"));
    }
    if n_terms == 0 {
        return Err(domain("q_expansion_direct n_terms", 0, "n_terms >= 1"));
    }
    Ok(eisenstein_series(k, n_terms))
}
