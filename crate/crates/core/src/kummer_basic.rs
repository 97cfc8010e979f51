//! The basic function field `F = F_q(x, y)` with `y^3 = u(x) = x f(x)`.
//!
//! Places of `F` are described by their x-side Kummer data: the place below,
//! the ramification index and a witness singling out one factor of
//! `T^3 - w` over the residue field below. Elements of `F` only ever appear in
//! the monomial form `g(x) y^k`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldOps, FiniteField};
use crate::polynomial::{enumerate_monic_irreducibles, sylvester_resultant, Poly, ResidueField};
use crate::rational_places::{Divisor, DivisorEntry, HasDegree, Place, RationalFunction};

/// Which factor of `T^3 - w` (over the residue field below) a place belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    /// `e = 3`, the factor is `T`.
    Ramified,
    /// A root `z` of `T^3 - w` in the residue field below.
    Split(Poly),
    /// `T^3 - w` is irreducible.
    Inert,
}

/// A place of `F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpPlace {
    below: Place,
    e: u32,
    f: u32,
    witness: Witness,
}

impl UpPlace {
    pub fn below(&self) -> &Place {
        &self.below
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn degree(&self) -> u64 {
        self.f as u64 * self.below.degree()
    }
}

impl HasDegree for UpPlace {
    fn degree(&self) -> u64 {
        UpPlace::degree(self)
    }
}

impl fmt::Display for UpPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.witness, &self.below) {
            (Witness::Ramified, below) => write!(f, "Q[{below}]"),
            (Witness::Inert, below) => write!(f, "Q[{below}; inert]"),
            (Witness::Split(z), Place::Infinity) => write!(f, "Q[inf; y/x={}]", z.display_in("x")),
            (Witness::Split(z), below) => write!(f, "Q[{below}; y={}]", z.display_in("x")),
        }
    }
}

pub type UpDivisor = Divisor<UpPlace>;

/// The element `g(x) y^k` of `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub g: RationalFunction,
    pub k: i64,
}

impl Monomial {
    pub fn new(g: RationalFunction, k: i64) -> Self {
        Monomial { g, k }
    }

    pub fn x(field: &FiniteField) -> Self {
        Monomial::new(RationalFunction::x(field), 0)
    }

    pub fn y(field: &FiniteField) -> Self {
        Monomial::new(RationalFunction::from_poly(Poly::one(field)), 1)
    }
}

/// Per-place x-side record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XRecord {
    pub place: String,
    pub below: String,
    pub degree: u64,
    pub e: u32,
    pub f: u32,
    pub d: i64,
}

/// Per-place y-side record for a place in the support of `Diff(F/F_q(y))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YRecord {
    pub place: String,
    /// The place of `F_q(y)` below, as its monic irreducible in `y`.
    pub below_y: String,
    pub below_degree: u64,
    pub e: u32,
    pub d: i64,
    /// `e` was read off as `d + 1` rather than measured as `v_Q(y)`.
    pub e_inferred: bool,
    /// The characteristic divides `e`.
    pub wild: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub max_degree: usize,
    pub flagged: Vec<String>,
    pub derived: Vec<String>,
    pub only_flagged: Vec<String>,
    pub only_derived: Vec<String>,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.only_flagged.is_empty() && self.only_derived.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationReport {
    pub q: u64,
    pub field: String,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub f: String,
    pub genus: u64,
    pub diff_x: Vec<DivisorEntry>,
    pub diff_y: Vec<DivisorEntry>,
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    pub galois_over_x: bool,
    pub x_records: Vec<XRecord>,
    pub y_records: Vec<YRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleComparison>,
    pub diagnostics: Vec<String>,
}

/// A ramified place of `F` over `F_q(y)` together with the place below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YRamification {
    pub place: UpPlace,
    pub below_y: Poly,
    pub e: u32,
    pub d: i64,
    pub e_inferred: bool,
    pub wild: bool,
}

/// `F_q(x, y)` with `y^3 = x (x^2 + b x + c)`.
#[derive(Debug, Clone)]
pub struct BasicField {
    field: FiniteField,
    b: FieldElement,
    c: FieldElement,
    f: Poly,
    u: Poly,
    u_factors: Vec<(Poly, u32)>,
}

impl BasicField {
    pub fn new(field: &FiniteField, b: FieldElement, c: FieldElement) -> Result<Self> {
        if !field.q_mod3_ok() {
            return Err(Error::QNotOneModThree(field.q()));
        }
        if b.is_zero() && c.is_zero() {
            return Err(Error::DoubleRootAtZero);
        }
        let f = Poly::new(field, vec![c.clone(), b.clone(), field.one()]);
        let u = &Poly::x(field) * &f;
        let u_factors = u.factor()?.factors;
        if u_factors.iter().all(|(_, m)| m % 3 == 0) {
            return Err(Error::TrivialKummer);
        }
        Ok(BasicField { field: field.clone(), b, c, f, u, u_factors })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    /// Irreducible factors of `u` with multiplicities.
    pub fn u_factors(&self) -> &[(Poly, u32)] {
        &self.u_factors
    }

    /// `F/F_q(x)` is cyclic of degree 3: cube roots of unity are in `F_q` and
    /// `u` is not a cube.
    pub fn is_galois_over_x(&self) -> bool {
        self.field.q_mod3_ok() && self.u_factors.iter().any(|(_, m)| m % 3 != 0)
    }

    fn u_valuation(&self, place: &Place) -> i64 {
        match place {
            Place::Infinity => -(self.u.degree_i64()),
            Place::Finite(pi) => self.u.multiplicity(pi).expect("u nonzero") as i64,
        }
    }

    pub fn places_above_x(&self, place: &Place) -> Vec<UpPlace> {
        let v = self.u_valuation(place);
        if v % 3 != 0 {
            return vec![UpPlace { below: place.clone(), e: 3, f: 1, witness: Witness::Ramified }];
        }
        let k = place.residue_field(&self.field);
        let w = match place {
            Place::Infinity => k.embed(self.u.leading().expect("nonzero")),
            Place::Finite(pi) => k.reduce(&self.u.exact_div(&pi.pow(v as u64)).expect("pi^v divides u")),
        };
        let roots = k.cube_roots(&w);
        if roots.is_empty() {
            return vec![UpPlace { below: place.clone(), e: 1, f: 3, witness: Witness::Inert }];
        }
        roots
            .into_iter()
            .map(|z| UpPlace { below: place.clone(), e: 1, f: 1, witness: Witness::Split(z) })
            .collect()
    }

    /// Places of `F_q(x)` ramified in `F`.
    pub fn ramified_below_x(&self) -> Vec<Place> {
        self.u_factors
            .iter()
            .filter(|(_, m)| m % 3 != 0)
            .map(|(pi, _)| Place::Finite(pi.clone()))
            .collect()
    }

    pub fn different_over_x(&self) -> UpDivisor {
        let mut diff = UpDivisor::new();
        for place in self.ramified_below_x() {
            for q in self.places_above_x(&place) {
                let e = q.e as i64;
                diff.add_term(q, e - 1);
            }
        }
        diff
    }

    /// Hurwitz over `F_q(x)`: `2g - 2 = 3(-2) + deg Diff`.
    pub fn genus(&self) -> u64 {
        let deg = self.different_over_x().degree();
        (deg / 2 - 2) as u64
    }

    pub fn up_valuation(&self, q: &UpPlace, m: &Monomial) -> Result<i64> {
        let e = q.e as i64;
        let vg = m.g.valuation(&q.below)?;
        let vu = self.u_valuation(&q.below);
        Ok(e * vg + m.k * e * vu / 3)
    }

    /// `(g y^k)_F`.
    pub fn principal_divisor(&self, m: &Monomial) -> Result<UpDivisor> {
        let mut below = m.g.support_candidates()?;
        if m.k != 0 {
            below.extend(self.u_factors.iter().map(|(pi, _)| Place::Finite(pi.clone())));
        }
        below.sort();
        below.dedup();
        let mut div = UpDivisor::new();
        for place in below {
            for q in self.places_above_x(&place) {
                let v = self.up_valuation(&q, m)?;
                div.add_term(q, v);
            }
        }
        Ok(div)
    }

    /// `u'(x) = f(x) + x f'(x)`.
    pub fn u_derivative(&self) -> Poly {
        self.u.derivative()
    }

    /// `Diff(F/F_q(y)) = 2(y)_inf + (u' y^-2)_F - 2(x)_inf + Diff(F/F_q(x))`,
    /// from `3 y^2 dy = u'(x) dx`.
    pub fn different_over_y(&self) -> Result<UpDivisor> {
        let div_x = self.principal_divisor(&Monomial::x(&self.field))?;
        let div_y = self.principal_divisor(&Monomial::y(&self.field))?;
        let z = Monomial::new(RationalFunction::from_poly(self.u_derivative()), -2);
        let div_z = self.principal_divisor(&z)?;
        for (name, d) in [("x", &div_x), ("y", &div_y), ("u'/y^2", &div_z)] {
            if d.degree() != 0 {
                return Err(Error::Diagnostic(format!("principal divisor of {name} has degree {}", d.degree())));
            }
        }
        let x_inf = div_x.negative_part();
        let y_inf = div_y.negative_part();
        if x_inf != y_inf {
            return Err(Error::Diagnostic(format!("pole divisors differ: (x) = {x_inf}, (y) = {y_inf}")));
        }
        let dx = &x_inf.scale(-2) + &self.different_over_x();
        let diff = &(&y_inf.scale(2) + &div_z) + &dx;
        if let Some((q, c)) = diff.terms().find(|(_, c)| *c < 0) {
            return Err(Error::Diagnostic(format!("negative different exponent {c} at {q}")));
        }
        if let Some(q) = diff.support().find(|q| q.below == Place::Infinity) {
            return Err(Error::Diagnostic(format!("pole of y {q} in the different over F_q(y)")));
        }
        Ok(diff)
    }

    /// Minimal polynomial over `F_q` of the residue of `y` at `q`, or `None`
    /// where `y` has a pole.
    pub fn y_residue_min_poly(&self, q: &UpPlace) -> Result<Option<Poly>> {
        let vy = self.up_valuation(q, &Monomial::y(&self.field))?;
        if vy < 0 {
            return Ok(None);
        }
        if vy > 0 {
            return Ok(Some(Poly::x(&self.field)));
        }
        let Place::Finite(pi) = &q.below else {
            return Err(Error::Diagnostic(format!("y is a unit above infinity at {q}")));
        };
        let k = ResidueField::new(pi)?;
        Ok(Some(match &q.witness {
            Witness::Split(z) => k.min_poly(z),
            // y^3 = w with w not a cube below: the minimal polynomial of y is m(T^3).
            Witness::Inert => k.min_poly(&k.reduce(&self.u)).compose_power(3),
            Witness::Ramified => return Err(Error::Diagnostic(format!("ramified place {q} with unit y"))),
        }))
    }

    pub fn ramification_over_y(&self) -> Result<Vec<YRamification>> {
        let diff = self.different_over_y()?;
        let p = self.field.p();
        let mut out = Vec::new();
        for (q, d) in diff.terms() {
            let below_y = self
                .y_residue_min_poly(q)?
                .ok_or_else(|| Error::Diagnostic(format!("pole of y {q} in the different over F_q(y)")))?;
            let (e, e_inferred) = if below_y.degree() == Some(1) && below_y.coeff(0).is_zero() {
                (self.up_valuation(q, &Monomial::y(&self.field))? as u32, false)
            } else {
                (d as u32 + 1, true)
            };
            let wild = (e as u64).is_multiple_of(p);
            if !wild && d != e as i64 - 1 {
                return Err(Error::Diagnostic(format!("tame place {q} has e = {e} but exponent {d}")));
            }
            out.push(YRamification { place: q.clone(), below_y, e, d, e_inferred, wild });
        }
        Ok(out)
    }

    /// Degrees of the places of `F_q(y)` ramified in `F`.
    pub fn degree_set_n(&self) -> Result<BTreeSet<u64>> {
        Ok(self
            .ramification_over_y()?
            .iter()
            .map(|r| r.below_y.degree().expect("non-constant") as u64)
            .collect())
    }

    /// Monic irreducibles `g(y)` of degree `<= max_degree` modulo which
    /// `t^3 + b t^2 + c t - y^3` acquires a repeated root.
    pub fn yside_oracle(&self, max_degree: usize) -> Vec<Poly> {
        let mut flagged = Vec::new();
        for g in enumerate_monic_irreducibles(&self.field, max_degree) {
            let k = ResidueField::new(&g).expect("irreducible");
            let y = k.generator();
            let y3 = k.mul(&k.mul(&y, &y), &y);
            let e = |c: &FieldElement| k.embed(c);
            let phi = [k.neg(&y3), e(&self.c), e(&self.b), k.one()];
            let dphi = [e(&self.c), e(&(&self.b + &self.b)), e(&self.field.from_int(3))];
            if k.is_zero(&sylvester_resultant(&k, &phi, &dphi)) {
                flagged.push(g);
            }
        }
        flagged
    }

    pub fn oracle_comparison(&self, max_degree: usize) -> Result<OracleComparison> {
        let flagged: BTreeSet<Poly> = self.yside_oracle(max_degree).into_iter().collect();
        let derived: BTreeSet<Poly> = self
            .ramification_over_y()?
            .into_iter()
            .map(|r| r.below_y)
            .filter(|g| g.degree().is_some_and(|d| d <= max_degree))
            .collect();
        let render = |set: &mut dyn Iterator<Item = &Poly>| set.map(|g| g.display_in("y").to_string()).collect();
        Ok(OracleComparison {
            max_degree,
            flagged: render(&mut flagged.iter()),
            derived: render(&mut derived.iter()),
            only_flagged: render(&mut flagged.difference(&derived)),
            only_derived: render(&mut derived.difference(&flagged)),
        })
    }

    pub fn report(&self, oracle_degree: Option<usize>) -> Result<RamificationReport> {
        let diff_x = self.different_over_x();
        let diff_y = self.different_over_y()?;
        let y_ram = self.ramification_over_y()?;
        let render = |q: &UpPlace| q.to_string();
        let x_records = diff_x
            .terms()
            .map(|(q, d)| XRecord {
                place: q.to_string(),
                below: q.below.to_string(),
                degree: q.degree(),
                e: q.e,
                f: q.f,
                d,
            })
            .collect();
        let mut diagnostics = Vec::new();
        let y_records = y_ram
            .iter()
            .map(|r| {
                if r.wild {
                    diagnostics.push(format!(
                        "wild ramification over F_q(y) at {}: e = {} divisible by p = {}, exponent {}",
                        r.place,
                        r.e,
                        self.field.p(),
                        r.d
                    ));
                }
                YRecord {
                    place: r.place.to_string(),
                    below_y: r.below_y.display_in("y").to_string(),
                    below_degree: r.below_y.degree().expect("non-constant") as u64,
                    e: r.e,
                    d: r.d,
                    e_inferred: r.e_inferred,
                    wild: r.wild,
                }
            })
            .collect();
        let oracle = oracle_degree.map(|d| self.oracle_comparison(d)).transpose()?;
        if let Some(cmp) = oracle.as_ref().filter(|c| !c.agrees()) {
            diagnostics.push(format!(
                "oracle disagreement (possible index divisors): only flagged {:?}, only derived {:?}",
                cmp.only_flagged, cmp.only_derived
            ));
        }
        let n = y_ram.iter().map(|r| r.below_y.degree().expect("non-constant") as u64).collect::<BTreeSet<_>>();
        Ok(RamificationReport {
            q: self.field.q(),
            field: self.field.spec().to_string(),
            b: self.b.coeffs().to_vec(),
            c: self.c.coeffs().to_vec(),
            f: self.f.to_string(),
            genus: (diff_x.degree() / 2 - 2) as u64,
            diff_x: diff_x.entries(render),
            diff_y: diff_y.entries(render),
            n: n.into_iter().collect(),
            galois_over_x: self.is_galois_over_x(),
            x_records,
            y_records,
            oracle,
            diagnostics,
        })
    }
}
