//! Exact arithmetic in `GF(p^r)`.
//!
//! Elements are dense coefficient vectors over `F_p` in the polynomial basis
//! `1, t, ..., t^(r-1)`, reduced modulo the lexicographically smallest monic
//! irreducible polynomial of degree `r` (coefficients compared low degree
//! first). The [`FieldOps`] trait abstracts over this field and over residue
//! fields `F_q[x]/(pi)` so root extraction is written once.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polynomial::Poly;

/// Default upper bound on `q`, keeps exhaustive operations tractable.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Arithmetic shared by [`FiniteField`] and residue fields of places.
pub trait FieldOps {
    type Elem: Clone + PartialEq + Ord + fmt::Debug;

    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn size(&self) -> u128;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// The element with canonical index `index` in `0..size()`.
    fn element(&self, index: u128) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut exp: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn is_cube(&self, a: &Self::Elem) -> bool {
        let size = self.size();
        if self.is_zero(a) || size % 3 != 1 {
            return true;
        }
        self.pow(a, (size - 1) / 3) == self.one()
    }

    /// All `z` with `z^3 = a`, sorted canonically.
    fn cube_roots(&self, a: &Self::Elem) -> Vec<Self::Elem> {
        let Some(root) = some_cube_root(self, a) else {
            return Vec::new();
        };
        if self.is_zero(a) || self.size() % 3 != 1 {
            return vec![root];
        }
        let zeta = primitive_cube_root_of_unity(self);
        let second = self.mul(&root, &zeta);
        let third = self.mul(&second, &zeta);
        let mut roots = vec![root, second, third];
        roots.sort();
        roots
    }
}

fn first_non_cube<F: FieldOps + ?Sized>(field: &F) -> F::Elem {
    let size = field.size();
    (1..size)
        .map(|i| field.element(i))
        .find(|g| !field.is_cube(g))
        .expect("a field with q = 1 mod 3 has non-cubes")
}

fn primitive_cube_root_of_unity<F: FieldOps + ?Sized>(field: &F) -> F::Elem {
    let g = first_non_cube(field);
    field.pow(&g, (field.size() - 1) / 3)
}

/// One cube root of `a`, or `None` when `a` is not a cube.
///
/// For `q = 1 mod 3` this is the Adleman-Manders-Miller method: a first
/// approximation `a^m` with `3m = 1 mod t` is corrected by a discrete
/// logarithm in the 3-Sylow subgroup of order `3^s`, where `q - 1 = 3^s t`.
fn some_cube_root<F: FieldOps + ?Sized>(field: &F, a: &F::Elem) -> Option<F::Elem> {
    let size = field.size();
    if field.is_zero(a) {
        return Some(field.zero());
    }
    if field.characteristic() == 3 {
        return Some(field.pow(a, size / 3));
    }
    if size % 3 == 2 {
        return Some(field.pow(a, (2 * size - 1) / 3));
    }
    if !field.is_cube(a) {
        return None;
    }
    let mut s = 0u32;
    let mut t = size - 1;
    while t.is_multiple_of(3) {
        t /= 3;
        s += 1;
    }
    let gamma = field.pow(&first_non_cube(field), t);
    let m = if t == 1 { 0 } else { mod_inverse(3, t) };
    let approx = field.pow(a, m);
    let a_inv = field.inv(a).expect("nonzero");
    let cubed = field.mul(&field.mul(&approx, &approx), &approx);
    // b = approx^3 / a lies in the 3-Sylow subgroup; find e with gamma^e = 1/b.
    let b = field.mul(&cubed, &a_inv);
    let target = field.inv(&b).expect("nonzero");
    let gamma_inv = field.inv(&gamma).expect("nonzero");
    let gamma_top = field.pow(&gamma, 3u128.pow(s - 1));
    let mut exponent: u128 = 0;
    for k in 0..s {
        let shifted = field.mul(&field.pow(&gamma_inv, exponent), &target);
        let delta = field.pow(&shifted, 3u128.pow(s - 1 - k));
        let digit = (0..3u128)
            .find(|&d| field.pow(&gamma_top, d) == delta)
            .expect("element of the 3-Sylow subgroup");
        exponent += digit * 3u128.pow(k);
    }
    debug_assert_eq!(exponent % 3, 0);
    Some(field.mul(&approx, &field.pow(&gamma, exponent / 3)))
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    old_s.rem_euclid(m as i128) as u128
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, r)` as written on the command line: `"p^r"` or a bare prime `"p"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    pub p: u64,
    pub r: u32,
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed field spec {s:?}, expected p or p^r"));
        let s = s.trim();
        let (p, r) = match s.split_once('^') {
            Some((p, r)) => (p.trim(), r.trim()),
            None => (s, "1"),
        };
        let p = p.parse::<u64>().map_err(|_| bad())?;
        let r = r.parse::<u32>().map_err(|_| bad())?;
        Ok(FieldSpec { p, r })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.r)
        }
    }
}

#[derive(Debug)]
struct Inner {
    p: u64,
    r: u32,
    q: u64,
    /// Monic modulus, low degree first, length `r + 1`; empty for prime fields.
    modulus: Vec<u64>,
}

/// `GF(p^r)`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

/// Shorthand for [`FiniteField::new`].
pub fn make_field(p: u64, r: u32) -> Result<FiniteField> {
    FiniteField::new(p, r)
}

impl FiniteField {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::with_bound(p, r, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u64, r: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r < 1 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= bound)
            .ok_or(Error::FieldTooLarge { p, r, bound })?;
        let prime = FiniteField(Arc::new(Inner { p, r: 1, q: p, modulus: Vec::new() }));
        if r == 1 {
            return Ok(prime);
        }
        let modulus = smallest_irreducible(&prime, r as usize);
        Ok(FiniteField(Arc::new(Inner { p, r, q, modulus })))
    }

    pub fn from_spec(spec: FieldSpec, bound: u64) -> Result<Self> {
        Self::with_bound(spec.p, spec.r, bound)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, r: self.0.r }
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    /// Modulus coefficients (low degree first), `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        (self.0.r > 1).then_some(self.0.modulus.as_slice())
    }

    /// True iff `q = 1 mod 3`, i.e. the field holds a primitive cube root of unity.
    pub fn q_mod3_ok(&self) -> bool {
        self.0.q % 3 == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coeffs: vec![0; self.0.r as usize] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// Element from low-degree-first coefficients; missing entries are zero.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.0.r as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients given for an extension of degree {}",
                coeffs.len(),
                self.0.r
            )));
        }
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            if c >= self.0.p {
                return Err(Error::InvalidArgument(format!("coefficient {c} not reduced mod {}", self.0.p)));
            }
            *slot = c;
        }
        Ok(e)
    }

    /// Element with canonical index `index` (base-`p` digits, low degree first).
    pub fn element_at(&self, mut index: u64) -> FieldElement {
        assert!(index < self.0.q, "element index out of range");
        let mut e = self.zero();
        for slot in e.coeffs.iter_mut() {
            *slot = index % self.0.p;
            index /= self.0.p;
        }
        e
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |i| self.element_at(i))
    }

    /// The class of `t`, which generates the field over `F_p`. Panics on prime fields.
    pub fn generator(&self) -> FieldElement {
        assert!(self.0.r > 1, "prime fields have no polynomial generator");
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    fn reduce_product(&self, prod: &mut Vec<u64>) {
        let p = self.0.p as u128;
        let r = self.0.r as usize;
        for i in (r..prod.len()).rev() {
            let c = prod[i] as u128;
            if c == 0 {
                continue;
            }
            for (j, &m) in self.0.modulus[..r].iter().enumerate() {
                let slot = &mut prod[i - r + j];
                *slot = ((*slot as u128 + (p - c) * m as u128) % p) as u64;
            }
            prod[i] = 0;
        }
        prod.truncate(r);
    }

    fn check_same(&self, other: &FiniteField) {
        assert!(self == other, "arithmetic between elements of different fields");
    }
}

fn smallest_irreducible(prime: &FiniteField, r: usize) -> Vec<u64> {
    let p = prime.p();
    let total = p.pow(r as u32);
    for index in 0..total {
        // c_0 is the most significant digit: lexicographic order, low degree first.
        let mut digits = vec![0u64; r];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % p;
            rest /= p;
        }
        if digits[0] == 0 {
            continue;
        }
        let mut coeffs: Vec<FieldElement> = digits.iter().map(|&d| prime.from_int(d as i64)).collect();
        coeffs.push(prime.one());
        let candidate = Poly::new(prime, coeffs);
        if candidate.is_irreducible().unwrap_or(false) {
            digits.push(1);
            return digits;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.r == other.0.r)
    }
}

impl Eq for FiniteField {}

impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.r.hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.r)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

#[derive(Clone)]
pub struct FieldElement {
    field: FiniteField,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Coefficients over `F_p`, low degree first, length `r`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Canonical index in `0..q`.
    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.field.p() + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn pow(&self, mut exp: u128) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(self.field.q() as u128 - 2))
    }

    /// Multiplicative order; divides `q - 1`.
    pub fn mul_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut order = self.field.q() - 1;
        for l in prime_divisors(order) {
            while order.is_multiple_of(l) && self.pow((order / l) as u128).is_one() {
                order /= l;
            }
        }
        Ok(order)
    }

    /// Euler's criterion for odd `q`; every element is a square in characteristic 2.
    pub fn is_square(&self) -> bool {
        if self.field.p() == 2 || self.is_zero() {
            return true;
        }
        self.pow((self.field.q() as u128 - 1) / 2).is_one()
    }

    /// All cube roots, sorted canonically.
    pub fn cube_roots(&self) -> Vec<FieldElement> {
        self.field.cube_roots(self)
    }

    /// Square root in characteristic 2 (Frobenius is bijective).
    pub fn sqrt_char2(&self) -> FieldElement {
        assert_eq!(self.field.p(), 2);
        self.pow(self.field.q() as u128 / 2)
    }

    /// Command-line form: integer for prime fields, `"c0,c1,..."` otherwise.
    pub fn to_arg_string(&self) -> String {
        if self.field.is_prime_field() {
            self.coeffs[0].to_string()
        } else {
            self.coeffs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_in(field: &FiniteField, s: &str) -> Result<FieldElement> {
        let coeffs = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidArgument(format!("malformed field element {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        field.from_coeffs(&coeffs)
    }
}

impl FieldOps for FiniteField {
    type Elem = FieldElement;

    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn size(&self) -> u128 {
        self.q() as u128
    }
    fn zero(&self) -> FieldElement {
        FiniteField::zero(self)
    }
    fn one(&self) -> FieldElement {
        FiniteField::one(self)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a - b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a * b
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        -a
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        a.inv().ok()
    }
    fn element(&self, index: u128) -> FieldElement {
        self.element_at(index as u64)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    /// Prime fields print the integer; extensions print a polynomial in `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_prime_field() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.field.check_same(&rhs.field);
        let p = self.field.p();
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| (a + b) % p).collect();
        FieldElement { field: self.field.clone(), coeffs }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.field.check_same(&rhs.field);
        let p = self.field.p();
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| (a + p - b) % p).collect();
        FieldElement { field: self.field.clone(), coeffs }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.field.check_same(&rhs.field);
        let p = self.field.p() as u128;
        if self.field.is_prime_field() {
            let c = (self.coeffs[0] as u128 * rhs.coeffs[0] as u128 % p) as u64;
            return FieldElement { field: self.field.clone(), coeffs: vec![c] };
        }
        let r = self.coeffs.len();
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u128 + a as u128 * b as u128) % p) as u64;
            }
        }
        self.field.reduce_product(&mut prod);
        FieldElement { field: self.field.clone(), coeffs: prod }
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero; use [`FieldElement::inv`] for a checked form.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inv().expect("division by zero field element")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p();
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement { field: self.field.clone(), coeffs }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add::add, Sub::sub, Mul::mul, Div::div);
