//! Classification of `(q, b, c)` and the infinite-genus criterion.

mod mawu;
mod pyramid;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};
use crate::kummer_basic::BasicField;
use crate::rational_places::Place;

pub use mawu::{verify_mawu, MawuReport};
pub use pyramid::{pyramid_trace, PyramidNode, PyramidTrace};

/// Largest witness degree searched unless configured otherwise.
pub const DEFAULT_MAX_WITNESS_DEGREE: u64 = 4;

/// `y^3 = x (x^2 + b x + c)` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    pub field: FiniteField,
    pub b: FieldElement,
    pub c: FieldElement,
}

impl TowerSpec {
    pub fn new(field: &FiniteField, b: FieldElement, c: FieldElement) -> Self {
        TowerSpec { field: field.clone(), b, c }
    }

    pub fn from_ints(field: &FiniteField, b: i64, c: i64) -> Self {
        TowerSpec::new(field, field.from_int(b), field.from_int(c))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.field.q_mod3_ok() {
            return Err(Error::QNotOneModThree(self.field.q()));
        }
        if self.b.is_zero() && self.c.is_zero() {
            return Err(Error::DoubleRootAtZero);
        }
        Ok(())
    }

    pub fn basic_field(&self) -> Result<BasicField> {
        BasicField::new(&self.field, self.b.clone(), self.c.clone())
    }

    /// Every `(b, c) != (0, 0)` over `field`, b-major in canonical order.
    pub fn sweep(field: &FiniteField) -> Vec<TowerSpec> {
        let mut out = Vec::new();
        for b in field.elements() {
            for c in field.elements() {
                if !(b.is_zero() && c.is_zero()) {
                    out.push(TowerSpec::new(field, b.clone(), c));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidReason {
    QNotOneModThree,
    DoubleRootAtZero,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::QNotOneModThree => write!(f, "q ≢ 1 mod 3"),
            InvalidReason::DoubleRootAtZero => write!(f, "t = 0 is a double root of f"),
        }
    }
}

/// Outcome of the classification theorem. Types 1 to 3 are necessary
/// conditions for a good tower, never a proof of goodness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// `f = (x + alpha)(x + beta)`, distinct and nonzero.
    Type1 { alpha: FieldElement, beta: FieldElement },
    /// `u = x^2 (x + alpha)`.
    Type2 { alpha: FieldElement },
    /// `f = (x + alpha)^2`.
    Type3 { alpha: FieldElement },
    IrreducibleInfiniteGenus,
    Invalid(InvalidReason),
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Type1 { .. } => "type1",
            Classification::Type2 { .. } => "type2",
            Classification::Type3 { .. } => "type3",
            Classification::IrreducibleInfiniteGenus => "irreducible_infinite_genus",
            Classification::Invalid(_) => "invalid",
        }
    }

    pub fn is_good_candidate(&self) -> bool {
        matches!(self, Classification::Type1 { .. } | Classification::Type2 { .. } | Classification::Type3 { .. })
    }

    pub fn parameters(&self) -> Vec<&FieldElement> {
        match self {
            Classification::Type1 { alpha, beta } => vec![alpha, beta],
            Classification::Type2 { alpha } | Classification::Type3 { alpha } => vec![alpha],
            _ => Vec::new(),
        }
    }

    pub fn record(&self) -> ClassificationRecord {
        ClassificationRecord {
            class: self.tag().to_string(),
            parameters: self.parameters().iter().map(|a| a.coeffs().to_vec()).collect(),
            reason: match self {
                Classification::Invalid(r) => Some(*r),
                _ => None,
            },
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Type1 { alpha, beta } => write!(f, "type1 (alpha = {alpha}, beta = {beta})"),
            Classification::Type2 { alpha } | Classification::Type3 { alpha } => {
                write!(f, "{} (alpha = {alpha})", self.tag())
            }
            Classification::IrreducibleInfiniteGenus => write!(f, "irreducible_infinite_genus"),
            Classification::Invalid(reason) => write!(f, "invalid: {reason}"),
        }
    }
}

/// JSON form of a [`Classification`]; parameters are coefficient arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub class: String,
    pub parameters: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<InvalidReason>,
}

pub fn classify(spec: &TowerSpec) -> Classification {
    if !spec.field.q_mod3_ok() {
        return Classification::Invalid(InvalidReason::QNotOneModThree);
    }
    if spec.b.is_zero() && spec.c.is_zero() {
        return Classification::Invalid(InvalidReason::DoubleRootAtZero);
    }
    let field = &spec.field;
    let (b, c) = (&spec.b, &spec.c);
    if c.is_zero() {
        return Classification::Type2 { alpha: b.clone() };
    }
    let f = crate::polynomial::Poly::new(field, vec![c.clone(), b.clone(), field.one()]);
    if f.is_irreducible().expect("quadratic") {
        return Classification::IrreducibleInfiniteGenus;
    }
    // gcd(f, f') detects the double root only in odd characteristic.
    if field.p() == 2 {
        if b.is_zero() {
            return Classification::Type3 { alpha: c.sqrt_char2() };
        }
    } else if (b * b) == (&field.from_int(4) * c) {
        return Classification::Type3 { alpha: b / &field.from_int(2) };
    }
    let mut alphas: Vec<FieldElement> = f.roots_in_field().expect("nonzero").iter().map(|r| -r).collect();
    alphas.sort();
    Classification::Type1 { alpha: alphas[0].clone(), beta: alphas[1].clone() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotApplicableReason {
    InvalidSpec,
    NotGalois,
    HReducible,
    SearchExhausted,
}

impl fmt::Display for NotApplicableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NotApplicableReason::InvalidSpec => "invalid_spec",
            NotApplicableReason::NotGalois => "not_galois",
            NotApplicableReason::HReducible => "h_reducible",
            NotApplicableReason::SearchExhausted => "search_exhausted",
        };
        write!(f, "{s}")
    }
}

/// Outcome of the criterion. `NotApplicable` says nothing about the genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionVerdict {
    InfiniteGenus { d: u64, witness: Place, n: BTreeSet<u64> },
    NotApplicable { reason: NotApplicableReason },
}

impl CriterionVerdict {
    pub fn d(&self) -> Option<u64> {
        match self {
            CriterionVerdict::InfiniteGenus { d, .. } => Some(*d),
            CriterionVerdict::NotApplicable { .. } => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CriterionVerdict::InfiniteGenus { .. } => "infinite_genus",
            CriterionVerdict::NotApplicable { .. } => "not_applicable",
        }
    }

    pub fn record(&self) -> VerdictRecord {
        match self {
            CriterionVerdict::InfiniteGenus { d, witness, n } => VerdictRecord {
                verdict: self.tag().to_string(),
                d: Some(*d),
                witness: Some(witness.to_string()),
                n: Some(n.iter().copied().collect()),
                reason: None,
            },
            CriterionVerdict::NotApplicable { reason } => VerdictRecord {
                verdict: self.tag().to_string(),
                d: None,
                witness: None,
                n: None,
                reason: Some(*reason),
            },
        }
    }
}

impl fmt::Display for CriterionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionVerdict::InfiniteGenus { d, witness, n } => {
                let n: Vec<String> = n.iter().map(u64::to_string).collect();
                write!(f, "d={d}, witness {witness}, N = {{{}}}", n.join(", "))
            }
            CriterionVerdict::NotApplicable { reason } => write!(f, "not applicable ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub n: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<NotApplicableReason>,
}

/// Whether `t f(t) - y^3` is irreducible over `F_q(y)`.
///
/// A root in `F_q(y)` is integral over `F_q[y]`, hence a polynomial `r`, and
/// `3 deg r = 3` forces `r = a y + beta`. Expanding `r f(r) = y^3` gives
/// four coefficient equations checked for every candidate.
pub fn h_irreducible_over_ky(spec: &TowerSpec) -> bool {
    let field = &spec.field;
    let (b, c) = (&spec.b, &spec.c);
    let k = |n: i64| field.from_int(n);
    for a in field.elements() {
        // y^3: a^3 = 1
        if !(&(&a * &a) * &a).is_one() {
            continue;
        }
        for beta in field.elements() {
            // y^2: 3 a^2 beta + b a^2
            let y2 = &(&a * &a) * &(&(&k(3) * &beta) + b);
            // y^1: a (3 beta^2 + 2 b beta + c)
            let y1 = &a * &(&(&(&k(3) * &(&beta * &beta)) + &(&k(2) * &(b * &beta))) + c);
            // y^0: beta f(beta)
            let y0 = &beta * &(&(&(&beta * &beta) + &(b * &beta)) + c);
            if y2.is_zero() && y1.is_zero() && y0.is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn check_criterion(spec: &TowerSpec, max_witness_degree: u64) -> Result<CriterionVerdict> {
    let not_applicable = |reason| Ok(CriterionVerdict::NotApplicable { reason });
    if spec.validate().is_err() {
        return not_applicable(NotApplicableReason::InvalidSpec);
    }
    let bf = spec.basic_field()?;
    if !bf.is_galois_over_x() {
        return not_applicable(NotApplicableReason::NotGalois);
    }
    if !h_irreducible_over_ky(spec) {
        return not_applicable(NotApplicableReason::HReducible);
    }
    let n = bf.degree_set_n()?;
    // A place of F_q(x) is ramified exactly when it divides u to a power prime to 3.
    let ramified = bf.ramified_below_x();
    for d in (2..=max_witness_degree).filter(|d| d % 3 != 0) {
        if n.iter().any(|m| m % d == 0) {
            continue;
        }
        if let Some(witness) = ramified.iter().find(|p| p.degree() == d) {
            return Ok(CriterionVerdict::InfiniteGenus { d, witness: witness.clone(), n });
        }
    }
    not_applicable(NotApplicableReason::SearchExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Poly;

    #[test]
    fn classify_examples() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let omega = f4.generator();
        let spec = TowerSpec::new(&f4, f4.one(), f4.one());
        assert_eq!(
            classify(&spec),
            Classification::Type1 { alpha: omega.clone(), beta: &omega * &omega }
        );
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(classify(&TowerSpec::from_ints(&f7, 0, 1)), Classification::IrreducibleInfiniteGenus);
        assert_eq!(classify(&TowerSpec::from_ints(&f7, 1, 0)), Classification::Type2 { alpha: f7.one() });
        assert_eq!(classify(&TowerSpec::from_ints(&f7, 2, 1)), Classification::Type3 { alpha: f7.one() });
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(
            classify(&TowerSpec::from_ints(&f5, 1, 1)),
            Classification::Invalid(InvalidReason::QNotOneModThree)
        );
        assert_eq!(
            classify(&TowerSpec::from_ints(&f7, 0, 0)),
            Classification::Invalid(InvalidReason::DoubleRootAtZero)
        );
    }

    #[test]
    fn type3_in_characteristic_two() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let w = f4.generator();
        let spec = TowerSpec::new(&f4, f4.zero(), &w * &w);
        assert_eq!(classify(&spec), Classification::Type3 { alpha: w });
    }

    #[test]
    fn class_counts_over_f7() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for spec in TowerSpec::sweep(&f7) {
            *counts.entry(classify(&spec).tag()).or_insert(0) += 1;
        }
        assert_eq!(counts["irreducible_infinite_genus"], 21);
        assert_eq!(counts["type1"], 15);
        assert_eq!(counts["type2"], 6);
        assert_eq!(counts["type3"], 6);
    }

    #[test]
    fn criterion_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let verdict = check_criterion(&TowerSpec::from_ints(&f7, 0, 1), DEFAULT_MAX_WITNESS_DEGREE).unwrap();
        let CriterionVerdict::InfiniteGenus { d, witness, n } = verdict else { panic!("{verdict:?}") };
        assert_eq!(d, 2);
        assert_eq!(witness, Place::Finite(Poly::from_ints(&f7, &[1, 0, 1])));
        assert!(n.iter().all(|m| m % 2 == 1));
        let f4 = FiniteField::new(2, 2).unwrap();
        let spec = TowerSpec::new(&f4, f4.one(), f4.one());
        assert_eq!(
            check_criterion(&spec, DEFAULT_MAX_WITNESS_DEGREE).unwrap(),
            CriterionVerdict::NotApplicable { reason: NotApplicableReason::SearchExhausted }
        );
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(
            check_criterion(&TowerSpec::from_ints(&f5, 0, 1), DEFAULT_MAX_WITNESS_DEGREE).unwrap(),
            CriterionVerdict::NotApplicable { reason: NotApplicableReason::InvalidSpec }
        );
    }

    #[test]
    fn h_irreducibility() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert!(h_irreducible_over_ky(&TowerSpec::from_ints(&f7, 0, 1)));
        let f4 = FiniteField::new(2, 2).unwrap();
        assert!(h_irreducible_over_ky(&TowerSpec::new(&f4, f4.one(), f4.one())));
        assert!(!h_irreducible_over_ky(&TowerSpec::from_ints(&f7, 0, 0)));
    }

    #[test]
    fn records_round_trip() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let rec = classify(&TowerSpec::new(&f4, f4.one(), f4.one())).record();
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"class\":\"type1\""));
        assert_eq!(serde_json::from_str::<ClassificationRecord>(&json).unwrap(), rec);
        let f7 = FiniteField::new(7, 1).unwrap();
        let v = check_criterion(&TowerSpec::from_ints(&f7, 0, 1), 4).unwrap().record();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<VerdictRecord>(&json).unwrap(), v);
    }
}
