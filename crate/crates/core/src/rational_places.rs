//! Places, valuations and divisors of the rational function field `F_q(x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::FiniteField;
use crate::polynomial::{enumerate_monic_irreducibles, Poly, ResidueField};

/// A place of `F_q(x)`: the zero of a monic irreducible, or the pole of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Finite(Poly),
}

impl Place {
    pub fn finite(pi: Poly) -> Result<Place> {
        if !pi.is_monic() || !pi.is_irreducible()? {
            return Err(Error::InvalidArgument(format!("{pi} is not monic irreducible")));
        }
        Ok(Place::Finite(pi))
    }

    pub fn degree(&self) -> u64 {
        match self {
            Place::Infinity => 1,
            Place::Finite(pi) => pi.degree().expect("non-constant") as u64,
        }
    }

    /// Residue field; the place at infinity uses `F_q[x]/(x) = F_q`.
    pub fn residue_field(&self, field: &FiniteField) -> ResidueField {
        match self {
            Place::Infinity => ResidueField::new(&Poly::x(field)),
            Place::Finite(pi) => ResidueField::new(pi),
        }
        .expect("non-constant modulus")
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> PlaceDisplay<'a> {
        PlaceDisplay { place: self, var }
    }
}

pub struct PlaceDisplay<'a> {
    place: &'a Place,
    var: &'a str,
}

impl fmt::Display for PlaceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.place {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(pi) => write!(f, "{}", pi.display_in(self.var)),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_in("x").fmt(f)
    }
}

/// Places that carry a degree over the constant field.
pub trait HasDegree {
    fn degree(&self) -> u64;
}

impl HasDegree for Place {
    fn degree(&self) -> u64 {
        Place::degree(self)
    }
}

/// `g = num/den` in lowest terms with `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = num.gcd(&den);
        let (num, den) = (num.exact_div(&g)?, den.exact_div(&g)?);
        let scale = den.leading().expect("nonzero").inv()?;
        Ok(RationalFunction { num: num.scale(&scale), den: den.scale(&scale) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field().clone();
        RationalFunction { num: p, den: Poly::one(&field) }
    }

    pub fn x(field: &FiniteField) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// `v_P(g)`.
    pub fn valuation(&self, place: &Place) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(match place {
            Place::Infinity => self.den.degree_i64() - self.num.degree_i64(),
            Place::Finite(pi) => self.num.multiplicity(pi)? as i64 - self.den.multiplicity(pi)? as i64,
        })
    }

    /// Finite places where numerator or denominator vanish, plus infinity.
    pub fn support_candidates(&self) -> Result<Vec<Place>> {
        let mut out = vec![Place::Infinity];
        for p in [&self.num, &self.den] {
            for (g, _) in p.factor()?.factors {
                out.push(Place::Finite(g));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn principal_divisor(&self) -> Result<Divisor<Place>> {
        let mut div = Divisor::new();
        for place in self.support_candidates()? {
            let v = self.valuation(&place)?;
            div.add_term(place, v);
        }
        Ok(div)
    }
}

/// Formal sum of places; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor<P: Ord> {
    coeffs: BTreeMap<P, i64>,
}

impl<P: Ord> Default for Divisor<P> {
    fn default() -> Self {
        Divisor { coeffs: BTreeMap::new() }
    }
}

impl<P: Ord + Clone + HasDegree> Divisor<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(place: P, coeff: i64) -> Self {
        let mut d = Self::new();
        d.add_term(place, coeff);
        d
    }

    pub fn add_term(&mut self, place: P, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(place.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&place);
        }
    }

    pub fn coeff(&self, place: &P) -> i64 {
        self.coeffs.get(place).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|(p, c)| c * p.degree() as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c > 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&P, i64)> {
        self.coeffs.iter().map(|(p, &c)| (p, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.coeffs.keys()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::new();
        for (p, c) in self.terms() {
            out.add_term(p.clone(), c * k);
        }
        out
    }

    /// Positive part (the zero divisor of a principal divisor).
    pub fn positive_part(&self) -> Self {
        let mut out = Self::new();
        for (p, c) in self.terms().filter(|(_, c)| *c > 0) {
            out.add_term(p.clone(), c);
        }
        out
    }

    /// Negated negative part (the pole divisor of a principal divisor).
    pub fn negative_part(&self) -> Self {
        let mut out = Self::new();
        for (p, c) in self.terms().filter(|(_, c)| *c < 0) {
            out.add_term(p.clone(), -c);
        }
        out
    }

    /// `[{place, coefficient, degree}]` with places rendered by `render`.
    pub fn entries(&self, render: impl Fn(&P) -> String) -> Vec<DivisorEntry> {
        self.terms()
            .map(|(p, c)| DivisorEntry { place: render(p), coefficient: c, degree: p.degree() })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub place: String,
    pub coefficient: i64,
    pub degree: u64,
}

impl<P: Ord + Clone + HasDegree> Add for &Divisor<P> {
    type Output = Divisor<P>;
    fn add(self, rhs: &Divisor<P>) -> Divisor<P> {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p.clone(), c);
        }
        out
    }
}

impl<P: Ord + Clone + HasDegree> Sub for &Divisor<P> {
    type Output = Divisor<P>;
    fn sub(self, rhs: &Divisor<P>) -> Divisor<P> {
        self + &(-rhs)
    }
}

impl<P: Ord + Clone + HasDegree> Neg for &Divisor<P> {
    type Output = Divisor<P>;
    fn neg(self) -> Divisor<P> {
        self.scale(-1)
    }
}

impl<P: Ord + Clone + HasDegree + fmt::Display> fmt::Display for Divisor<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(p, c)| if c == 1 { format!("{p}") } else { format!("{c}*{p}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Infinity followed by every finite place of degree `<= max_degree`.
pub fn enumerate_places(field: &FiniteField, max_degree: usize) -> Vec<Place> {
    std::iter::once(Place::Infinity)
        .chain(enumerate_monic_irreducibles(field, max_degree).into_iter().map(Place::Finite))
        .collect()
}
