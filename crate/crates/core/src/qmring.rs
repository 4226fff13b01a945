//! The graded ring `Q[E2, E4, E6]` of quasimodular forms.
//!
//! A [`GradedForm`] is a homogeneous polynomial in three generators of weights
//! 2, 4 and 6. The generators are read in one of two normalizations:
//!
//! * **E**: the generators are `E2, E4, E6` (constant term 1).
//! * **G**: the generators are `G_k / π^k` with `G_k = 2ζ(k) E_k`, so
//!   `G_k / π^k = r_k E_k` with the rational `r_k = 2ζ(k)/π^k`.
//!
//! Because every form is homogeneous the powers of π cancel, so both
//! normalizations have rational coefficients and [`GradedForm::to_e_basis`] /
//! [`GradedForm::to_g_basis`] move between them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{zeta_ratio, ExactRational};
use crate::series::{eisenstein_series, QSeries};

/// Exponents of `E2^e2 E4^e4 E6^e6`; ordered lexicographically on `(e2, e4, e6)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial::new(0, 0, 0);

    pub const fn new(e2: u32, e4: u32, e6: u32) -> Self {
        Self { e2, e4, e6 }
    }

    pub fn weight(self) -> u32 {
        2 * self.e2 + 4 * self.e4 + 6 * self.e6
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.e2 + other.e2, self.e4 + other.e4, self.e6 + other.e6)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("E2", self.e2), ("E4", self.e4), ("E6", self.e6)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Homogeneous element of `Q[E2, E4, E6]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedForm {
    weight: u32,
    terms: BTreeMap<Monomial, ExactRational>,
}

impl GradedForm {
    pub fn zero(weight: u32) -> Self {
        Self {
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn monomial(c: ExactRational, m: Monomial) -> Self {
        let mut f = Self::zero(m.weight());
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    pub fn e2() -> Self {
        Self::monomial(ExactRational::one(), Monomial::new(1, 0, 0))
    }

    pub fn e4() -> Self {
        Self::monomial(ExactRational::one(), Monomial::new(0, 1, 0))
    }

    pub fn e6() -> Self {
        Self::monomial(ExactRational::one(), Monomial::new(0, 0, 1))
    }

    /// Builds a form of the given weight, summing repeated monomials and
    /// rejecting any term of the wrong weight.
    pub fn from_terms<I>(weight: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactRational)>,
    {
        let mut f = Self::zero(weight);
        for (m, c) in terms {
            if m.weight() != weight {
                return Err(Error::WeightMismatch {
                    left: weight,
                    right: m.weight(),
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, m: Monomial, c: ExactRational) {
        debug_assert_eq!(m.weight(), self.weight);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> ExactRational {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// True when some term contains `E2`, i.e. the form is not modular.
    pub fn has_e2(&self) -> bool {
        self.terms.keys().any(|m| m.e2 > 0)
    }

    /// The part of the form with positive `E2` exponent.
    pub fn e2_part(&self) -> GradedForm {
        GradedForm {
            weight: self.weight,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.e2 > 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &GradedForm) -> Result<GradedForm> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.weight != other.weight {
            return Err(Error::WeightMismatch {
                left: self.weight,
                right: other.weight,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedForm) -> Result<GradedForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedForm {
        self.scale(&ExactRational::from(-1))
    }

    pub fn scale(&self, c: &ExactRational) -> GradedForm {
        if c.is_zero() {
            return GradedForm::zero(self.weight);
        }
        GradedForm {
            weight: self.weight,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &GradedForm) -> GradedForm {
        let weight = self.weight + other.weight;
        if self.is_zero() || other.is_zero() {
            return GradedForm::zero(weight);
        }
        // Integer convolution over a shared denominator: one reduction per output term.
        let (lhs_den, lhs) = integral_terms(self);
        let (rhs_den, rhs) = integral_terms(other);
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m1, a) in &lhs {
            for (m2, b) in &rhs {
                *acc.entry(m1.mul(*m2)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        let den = lhs_den * rhs_den;
        let terms = acc
            .into_iter()
            .filter(|(_, n)| !n.is_zero())
            .map(|(m, n)| (m, ExactRational::new(n, den.clone()).expect("nonzero denominator")))
            .collect();
        GradedForm { weight, terms }
    }

    pub fn pow(&self, e: u32) -> GradedForm {
        let mut acc = GradedForm::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies the derivation determined by the images of the three generators.
    fn apply_derivation(&self, images: &[GradedForm; 3]) -> GradedForm {
        let mut out = GradedForm::zero(self.weight + 2);
        for (m, c) in &self.terms {
            let exps = [m.e2, m.e4, m.e6];
            for (i, image) in images.iter().enumerate() {
                let e = exps[i];
                if e == 0 {
                    continue;
                }
                let mut lowered = exps;
                lowered[i] -= 1;
                let rest = GradedForm::monomial(
                    c.scale(&BigInt::from(e)),
                    Monomial::new(lowered[0], lowered[1], lowered[2]),
                );
                out = out
                    .add(&rest.mul(image))
                    .expect("derivation preserves homogeneity");
            }
        }
        out
    }

    /// `π² f'` for `f` read in the G-normalization, where `f' = (1/2πi) df/dz`.
    ///
    /// Generator images: `π²G2' = G2²/4 − (5/4)G4`, `π²G4' = G2G4 − (7/2)G6`,
    /// `π²G6' = (3/2)G2G6 − (15/7)G4²`.
    pub fn derivative(&self) -> GradedForm {
        let q = |n, d| ExactRational::new(n, d).expect("nonzero");
        let images = [
            GradedForm::from_terms(
                4,
                [
                    (Monomial::new(2, 0, 0), q(1, 4)),
                    (Monomial::new(0, 1, 0), q(-5, 4)),
                ],
            )
            .expect("weight 4"),
            GradedForm::from_terms(
                6,
                [
                    (Monomial::new(1, 1, 0), q(1, 1)),
                    (Monomial::new(0, 0, 1), q(-7, 2)),
                ],
            )
            .expect("weight 6"),
            GradedForm::from_terms(
                8,
                [
                    (Monomial::new(1, 0, 1), q(3, 2)),
                    (Monomial::new(0, 2, 0), q(-15, 7)),
                ],
            )
            .expect("weight 8"),
        ];
        self.apply_derivation(&images)
    }

    /// `f' = (1/2πi) df/dz` for `f` read in the E-normalization (Ramanujan):
    /// `E2' = (E2² − E4)/12`, `E4' = (E2E4 − E6)/3`, `E6' = (E2E6 − E4²)/2`.
    pub fn derivative_e(&self) -> GradedForm {
        let q = |n, d| ExactRational::new(n, d).expect("nonzero");
        let images = [
            GradedForm::from_terms(
                4,
                [
                    (Monomial::new(2, 0, 0), q(1, 12)),
                    (Monomial::new(0, 1, 0), q(-1, 12)),
                ],
            )
            .expect("weight 4"),
            GradedForm::from_terms(
                6,
                [
                    (Monomial::new(1, 1, 0), q(1, 3)),
                    (Monomial::new(0, 0, 1), q(-1, 3)),
                ],
            )
            .expect("weight 6"),
            GradedForm::from_terms(
                8,
                [
                    (Monomial::new(1, 0, 1), q(1, 2)),
                    (Monomial::new(0, 2, 0), q(-1, 2)),
                ],
            )
            .expect("weight 8"),
        ];
        self.apply_derivation(&images)
    }

    /// `π² f'` in the G-normalization computed through the E-normalization;
    /// an independent route to [`GradedForm::derivative`].
    pub fn derivative_via_e_basis(&self) -> GradedForm {
        self.to_e_basis().derivative_e().to_g_basis()
    }

    /// Rewrites a G-normalized form over `E2, E4, E6` (each `G_k/π^k = r_k E_k`).
    pub fn to_e_basis(&self) -> GradedForm {
        self.rescale_generators(false)
    }

    /// Inverse of [`GradedForm::to_e_basis`].
    pub fn to_g_basis(&self) -> GradedForm {
        self.rescale_generators(true)
    }

    fn rescale_generators(&self, invert: bool) -> GradedForm {
        let r = [2u32, 4, 6].map(|k| {
            let v = zeta_ratio(k).expect("even weight");
            if invert {
                v.recip().expect("nonzero")
            } else {
                v
            }
        });
        GradedForm {
            weight: self.weight,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let factor = r[0].pow(m.e2.into()).expect("nonzero")
                        * r[1].pow(m.e4.into()).expect("nonzero")
                        * r[2].pow(m.e6.into()).expect("nonzero");
                    (*m, c * &factor)
                })
                .collect(),
        }
    }

    /// Canonical text form `weight; e2,e4,e6:num/den; ...` in ascending
    /// monomial order. The zero form is just `weight`.
    pub fn to_canonical_string(&self) -> String {
        let mut s = self.weight.to_string();
        for (m, c) in &self.terms {
            s.push_str(&format!("; {},{},{}:{}", m.e2, m.e4, m.e6, c.to_ratio_string()));
        }
        s
    }
}

fn integral_terms(f: &GradedForm) -> (BigInt, Vec<(Monomial, BigInt)>) {
    let den = f
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let terms = f
        .terms
        .iter()
        .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
        .collect();
    (den, terms)
}

impl FromStr for GradedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid graded form `{s}`"));
        let mut parts = s.split(';');
        let weight: u32 = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let mut terms = Vec::new();
        for part in parts {
            let (exps, coeff) = part.split_once(':').ok_or_else(bad)?;
            let e: Vec<u32> = exps
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if e.len() != 3 {
                return Err(bad());
            }
            terms.push((Monomial::new(e[0], e[1], e[2]), coeff.parse()?));
        }
        GradedForm::from_terms(weight, terms)
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if *m == Monomial::ONE {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates a form read in the E-normalization by substituting the exact
/// q-expansions of `E2, E4, E6`, truncated to `n_terms`.
pub fn substitute_q_expansion(f: &GradedForm, n_terms: usize) -> QSeries {
    let gens = [2u32, 4, 6].map(|k| eisenstein_series(k, n_terms));
    let mut powers: [Vec<QSeries>; 3] = Default::default();
    for (i, g) in gens.iter().enumerate() {
        powers[i].push(QSeries::constant(ExactRational::one(), n_terms));
        powers[i].push(g.clone());
    }
    let mut power = |i: usize, e: u32| -> QSeries {
        let list = &mut powers[i];
        while list.len() <= e as usize {
            let next = list.last().expect("seeded").mul(&gens[i]);
            list.push(next);
        }
        list[e as usize].clone()
    };
    let mut out = QSeries::constant(ExactRational::zero(), n_terms);
    for (m, c) in f.terms() {
        let term = power(0, m.e2).mul(&power(1, m.e4)).mul(&power(2, m.e6));
        out = out.add(&term.scale(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<ExactRational> {
        v.iter().map(|&x| ExactRational::from(x)).collect()
    }

    #[test]
    fn addition() {
        let e4_cubed = GradedForm::e4().pow(3);
        let z = e4_cubed.add(&e4_cubed.neg()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.weight(), 12);

        let e4e6 = GradedForm::e4().mul(&GradedForm::e6());
        let s = e4e6.scale(&q(2, 1)).add(&e4e6.scale(&q(3, 1))).unwrap();
        assert_eq!(s, e4e6.scale(&q(5, 1)));

        let err = GradedForm::e4().pow(2).add(&GradedForm::e6());
        assert_eq!(err, Err(Error::WeightMismatch { left: 8, right: 6 }));
        assert!(GradedForm::zero(3).add(&GradedForm::e6()).is_ok());
    }

    #[test]
    fn multiplication() {
        let p = GradedForm::e4().mul(&GradedForm::e6());
        assert_eq!(p.weight(), 10);
        assert_eq!(p.coeff(Monomial::new(0, 1, 1)), ExactRational::one());
        let f = GradedForm::e4().add(&GradedForm::e2().pow(2)).unwrap();
        assert_eq!(f.mul(&GradedForm::one()), f);
        let g = GradedForm::e4().sub(&GradedForm::e2().pow(2)).unwrap();
        let expected = GradedForm::e4().pow(2).sub(&GradedForm::e2().pow(4)).unwrap();
        assert_eq!(f.mul(&g), expected);
        assert_eq!(expected.weight(), 8);
    }

    #[test]
    fn homogeneity_enforced() {
        let bad = GradedForm::from_terms(8, [(Monomial::new(0, 0, 1), q(1, 1))]);
        assert!(matches!(bad, Err(Error::WeightMismatch { .. })));
    }

    #[test]
    fn derivative_of_generators() {
        let d4 = GradedForm::e4().derivative();
        let expected = GradedForm::from_terms(
            6,
            [(Monomial::new(1, 1, 0), q(1, 1)), (Monomial::new(0, 0, 1), q(-7, 2))],
        )
        .unwrap();
        assert_eq!(d4, expected);
        let d6 = GradedForm::e6().derivative();
        assert_eq!(d6.coeff(Monomial::new(1, 0, 1)), q(3, 2));
        assert_eq!(d6.coeff(Monomial::new(0, 2, 0)), q(-15, 7));
        assert!(GradedForm::one().derivative().is_zero());
        assert!(GradedForm::constant(q(5, 3)).derivative_e().is_zero());
    }

    #[test]
    fn g_basis_derivative_matches_e_basis_route() {
        for f in sample_forms() {
            assert_eq!(f.derivative(), f.derivative_via_e_basis(), "{f}");
        }
    }

    #[test]
    fn basis_change_roundtrip() {
        for f in sample_forms() {
            assert_eq!(f.to_e_basis().to_g_basis(), f);
        }
        // G4/π^4 = E4/45
        assert_eq!(GradedForm::e4().to_e_basis(), GradedForm::e4().scale(&q(1, 45)));
    }

    fn sample_forms() -> Vec<GradedForm> {
        let e2 = GradedForm::e2();
        let e4 = GradedForm::e4();
        let e6 = GradedForm::e6();
        vec![
            e2.clone(),
            e4.clone(),
            e6.clone(),
            e4.mul(&e6),
            e4.pow(3),
            e2.mul(&e6).add(&e4.pow(2).scale(&q(-3, 7))).unwrap(),
        ]
    }

    #[test]
    fn q_expansions() {
        let s = substitute_q_expansion(&GradedForm::e4(), 3);
        assert_eq!(s.coeffs(), ints(&[1, 240, 2160]).as_slice());
        let one = substitute_q_expansion(&GradedForm::one(), 5);
        assert_eq!(one.coeffs(), ints(&[1, 0, 0, 0, 0]).as_slice());
        let delta1728 = GradedForm::e4().pow(3).sub(&GradedForm::e6().pow(2)).unwrap();
        let s = substitute_q_expansion(&delta1728, 4);
        assert_eq!(s.coeffs(), ints(&[0, 1728, -41472, 435456]).as_slice());
    }

    #[test]
    fn derivation_commutes_with_q_expansion() {
        let n = 20;
        for f in sample_forms() {
            let lhs = substitute_q_expansion(&f.derivative_e(), n);
            let rhs = substitute_q_expansion(&f, n).q_derivative();
            assert_eq!(lhs, rhs, "{f}");
        }
    }

    #[test]
    fn canonical_serialization() {
        let f = GradedForm::from_terms(
            12,
            [(Monomial::new(0, 3, 0), q(18, 143)), (Monomial::new(0, 0, 2), q(25, 143))],
        )
        .unwrap();
        let s = f.to_canonical_string();
        assert_eq!(s, "12; 0,0,2:25/143; 0,3,0:18/143");
        assert_eq!(s.parse::<GradedForm>().unwrap(), f);
        assert_eq!(GradedForm::zero(6).to_canonical_string(), "6");
        assert_eq!("6".parse::<GradedForm>().unwrap(), GradedForm::zero(6));
        assert!("12; 0,0,1:1/1".parse::<GradedForm>().is_err());
    }

    pub(crate) fn arb_form(weight: u32) -> impl Strategy<Value = GradedForm> {
        let monos: Vec<Monomial> = (0..=weight / 2)
            .flat_map(|e2| (0..=weight / 4).flat_map(move |e4| (0..=weight / 6).map(move |e6| Monomial::new(e2, e4, e6))))
            .filter(|m| m.weight() == weight)
            .collect();
        let n = monos.len();
        proptest::collection::vec((-20i64..20, 1i64..6), n).prop_map(move |cs| {
            GradedForm::from_terms(
                weight,
                monos.iter().zip(cs).map(|(m, (a, b))| (*m, ExactRational::new(a, b).unwrap())),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn leibniz_rule(f in arb_form(6), g in arb_form(8)) {
            let lhs = f.mul(&g).derivative();
            let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative())).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_commutative_associative(f in arb_form(4), g in arb_form(6), h in arb_form(8)) {
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        }

        #[test]
        fn serialization_roundtrip(f in arb_form(12)) {
            prop_assert_eq!(f.to_canonical_string().parse::<GradedForm>().unwrap(), f);
        }
    }
}
