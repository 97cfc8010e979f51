//! Factorization over `F_q`: squarefree decomposition, distinct-degree
//! factorization, then Cantor-Zassenhaus equal-degree splitting.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::finite_field::{prime_divisors, FieldElement, FiniteField};

static SPLITTING_SEED: AtomicU64 = AtomicU64::new(0);

/// Seed for the randomized equal-degree splitting. Every call to
/// [`Poly::factor`] starts a fresh generator from this seed.
pub fn set_splitting_seed(seed: u64) {
    SPLITTING_SEED.store(seed, Ordering::Relaxed);
}

pub fn splitting_seed() -> u64 {
    SPLITTING_SEED.load(Ordering::Relaxed)
}

/// Below this field size, quadratics are split by exhaustive root search.
const BRUTE_FORCE_MAX_Q: u64 = 256;

/// `unit * prod(factor^multiplicity)`, factors monic, irreducible, distinct
/// and sorted by degree then coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (g, m)| &acc * &g.pow(*m as u64))
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }
}

impl Poly {
    pub fn factor(&self) -> Result<Factorization> {
        self.factor_seeded(splitting_seed())
    }

    pub fn factor_seeded(&self, seed: u64) -> Result<Factorization> {
        let unit = self.leading().cloned().ok_or(Error::ZeroPolynomial)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors = Vec::new();
        for (part, mult) in squarefree_decomposition(&self.monic()) {
            for (block, degree) in distinct_degree(&part) {
                for g in equal_degree(&block, degree, &mut rng) {
                    factors.push((g, mult));
                }
            }
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }

    /// Rabin's test: `f | x^(q^n) - x` and `gcd(x^(q^(n/l)) - x, f) = 1` for primes `l | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let q = self.field().q() as u128;
        let x = Poly::x(self.field());
        let frob = |times: usize| -> Result<Poly> {
            let mut h = x.clone();
            for _ in 0..times {
                h = h.pow_mod(q, &f)?;
            }
            Ok(h)
        };
        if frob(n)? != x.rem(&f)? {
            return Ok(false);
        }
        for l in prime_divisors(n as u64) {
            let h = frob(n / l as usize)?;
            if !(&h - &x).gcd(&f).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Roots in the coefficient field with multiplicity, sorted.
    pub fn roots_in_field(&self) -> Result<Vec<FieldElement>> {
        let fact = self.factor()?;
        let mut roots = Vec::new();
        for (g, m) in &fact.factors {
            if g.degree() == Some(1) {
                let root = -&g.coeff(0);
                roots.extend(std::iter::repeat_n(root, *m as usize));
            }
        }
        roots.sort();
        Ok(roots)
    }
}

/// `p`-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.p() as usize;
    let exp = (field.q() / field.p()) as u128;
    let coeffs = f.coeffs().iter().step_by(p).map(|c| c.pow(exp)).collect();
    Poly::new(field, coeffs)
}

fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).expect("gcd divides");
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        c = c.exact_div(&y).expect("gcd divides");
        w = y;
    }
    if !c.is_one() {
        let p = f.field().p() as u32;
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of equal-degree factors.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.q() as u128;
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree_i64() >= 2 * (d as i64 + 1) {
        d += 1;
        h = h.pow_mod(q, &rest).expect("nonzero modulus");
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero modulus");
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    out
}

fn random_poly(field: &FiniteField, below_degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..below_degree).map(|_| field.element_at(rng.gen_range(0..field.q()))).collect();
    Poly::new(field, coeffs)
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn equal_degree(g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = g.degree().expect("nonzero");
    if n == d {
        return vec![g.clone()];
    }
    let field = g.field();
    if d == 1 && n == 2 && field.q() <= BRUTE_FORCE_MAX_Q {
        let roots: Vec<FieldElement> = field.elements().filter(|a| g.eval(a).is_zero()).collect();
        return roots.iter().map(Poly::linear_root).collect();
    }
    let q = field.q() as u128;
    loop {
        let a = random_poly(field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if field.p() == 2 {
            // Absolute trace to F_2: a + a^2 + ... + a^(2^(r d - 1)).
            let steps = field.r() as usize * d;
            let mut term = a.clone();
            let mut acc = a.clone();
            for _ in 1..steps {
                term = (&term * &term).rem(g).expect("nonzero");
                acc = &acc + &term;
            }
            acc
        } else {
            // a^((q^d - 1)/2) = N(a)^((q - 1)/2) with N(a) = a^(1 + q + ... + q^(d-1)).
            let mut norm = a.rem(g).expect("nonzero");
            let mut conj = norm.clone();
            for _ in 1..d {
                conj = conj.pow_mod(q, g).expect("nonzero");
                norm = (&norm * &conj).rem(g).expect("nonzero");
            }
            let half = norm.pow_mod((q - 1) / 2, g).expect("nonzero");
            &half - &Poly::one(field)
        };
        let split = b.gcd(g);
        if split.is_one() || split.degree() == Some(n) || split.is_zero() {
            continue;
        }
        let other = g.exact_div(&split).expect("gcd divides");
        let mut out = equal_degree(&split, d, rng);
        out.extend(equal_degree(&other, d, rng));
        return out;
    }
}

/// Every monic irreducible of degree `1..=max_degree`, sorted canonically.
pub fn enumerate_monic_irreducibles(field: &FiniteField, max_degree: usize) -> Vec<Poly> {
    let q = field.q();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let count = q.checked_pow(d as u32).expect("enumeration size overflow");
        for index in 0..count {
            let mut rest = index;
            let mut coeffs: Vec<FieldElement> = (0..d)
                .map(|_| {
                    let c = field.element_at(rest % q);
                    rest /= q;
                    c
                })
                .collect();
            coeffs.push(field.one());
            let candidate = Poly::new(field, coeffs);
            if candidate.is_irreducible().expect("non-constant") {
                out.push(candidate);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64, r: u32) -> FiniteField {
        FiniteField::new(p, r).unwrap()
    }

    #[test]
    fn f4_x2_x_1_splits_into_conjugate_roots() {
        let f4 = field(2, 2);
        let w = f4.generator();
        let f = Poly::from_ints(&f4, &[1, 1, 1]);
        let fact = f.factor().unwrap();
        // Roots of x^2+x+1 in F_4 are w and w^2 = w+1; over char 2 x+w = x-w.
        let w2 = &w * &w;
        assert_eq!(fact.factors, vec![(Poly::linear_root(&w), 1), (Poly::linear_root(&w2), 1)]);
        assert!(!f.is_irreducible().unwrap());
    }

    #[test]
    fn x2_plus_1_irreducible_mod_7() {
        let f7 = field(7, 1);
        let f = Poly::from_ints(&f7, &[1, 0, 1]);
        assert!(f.is_irreducible().unwrap());
        assert!(f.factor().unwrap().is_irreducible());
        assert!(f.roots_in_field().unwrap().is_empty());
    }

    #[test]
    fn square_of_x() {
        let f7 = field(7, 1);
        let fact = Poly::from_ints(&f7, &[0, 0, 1]).factor().unwrap();
        assert_eq!(fact.factors, vec![(Poly::x(&f7), 2)]);
    }

    #[test]
    fn roots_examples() {
        let f7 = field(7, 1);
        let idx = |p: &Poly| p.roots_in_field().unwrap().iter().map(FieldElement::index).collect::<Vec<_>>();
        assert_eq!(idx(&Poly::from_ints(&f7, &[-1, 0, 1])), vec![1, 6]);
        assert_eq!(idx(&Poly::from_ints(&f7, &[1, 1, 1])), vec![2, 4]);
        assert_eq!(idx(&Poly::from_ints(&f7, &[0, 0, 0, 1])), vec![0, 0, 0]);
    }

    #[test]
    fn linear_is_irreducible_constant_errors() {
        let f7 = field(7, 1);
        assert!(Poly::from_ints(&f7, &[3, 1]).is_irreducible().unwrap());
        assert_eq!(Poly::from_ints(&f7, &[3]).is_irreducible().unwrap_err(), Error::ConstantPolynomial);
        assert_eq!(Poly::zero(&f7).factor().unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn inseparable_parts_in_char_p() {
        // (x^2 + t)^2 * (x + 1)^3 over F_4 and x^7 - 1 = (x - 1)^7 over F_7.
        let f4 = field(2, 2);
        let g = Poly::new(&f4, vec![f4.generator(), f4.zero(), f4.one()]);
        let h = Poly::from_ints(&f4, &[1, 1]);
        let f = &g.pow(2) * &h.pow(3);
        assert_eq!(f.factor().unwrap().reconstruct(), f);
        let f7 = field(7, 1);
        let fact = Poly::from_ints(&f7, &[-1, 0, 0, 0, 0, 0, 0, 1]).factor().unwrap();
        assert_eq!(fact.factors, vec![(Poly::from_ints(&f7, &[-1, 1]), 7)]);
    }

    #[test]
    fn quadratic_irreducible_count_over_f7() {
        let f7 = field(7, 1);
        let quads = enumerate_monic_irreducibles(&f7, 2).into_iter().filter(|p| p.degree() == Some(2)).count();
        assert_eq!(quads, 21);
    }

    fn mobius(n: u64) -> i64 {
        let ps = prime_divisors(n);
        if ps.iter().any(|p| n.is_multiple_of(p * p)) {
            0
        } else if ps.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn necklace_counts() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let f = field(p, r);
            let q = f.q() as i64;
            let max_d = if q <= 9 { 4 } else { 3 };
            let all = enumerate_monic_irreducibles(&f, max_d);
            for d in 1..=max_d as u64 {
                let expected: i64 = (1..=d)
                    .filter(|e| d % e == 0)
                    .map(|e| mobius(e) * q.pow((d / e) as u32))
                    .sum::<i64>()
                    / d as i64;
                let got = all.iter().filter(|g| g.degree() == Some(d as usize)).count() as i64;
                assert_eq!(got, expected, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = field(p, r);
            let small = enumerate_monic_irreducibles(&f, 2);
            let q = f.q();
            for d in 1..=4usize {
                for index in 0..q.pow(d as u32) {
                    let mut rest = index;
                    let mut coeffs: Vec<FieldElement> = (0..d)
                        .map(|_| {
                            let c = f.element_at(rest % q);
                            rest /= q;
                            c
                        })
                        .collect();
                    coeffs.push(f.one());
                    let cand = Poly::new(&f, coeffs);
                    // A reducible polynomial of degree <= 4 has a factor of degree <= 2.
                    let has_divisor = small
                        .iter()
                        .any(|g| g.degree() < cand.degree() && cand.rem(g).unwrap().is_zero());
                    assert_eq!(cand.is_irreducible().unwrap(), !has_divisor, "{cand} over {f}");
                    assert_eq!(cand.factor().unwrap().is_irreducible(), !has_divisor);
                }
            }
        }
    }

    #[test]
    fn factor_output_is_seed_independent() {
        let f13 = field(13, 1);
        let f = Poly::from_ints(&f13, &[5, 0, 3, 1, 0, 7, 2, 1, 1]);
        let a = f.factor_seeded(0).unwrap();
        let b = f.factor_seeded(12345).unwrap();
        assert_eq!(a, b);
    }

    fn fields() -> impl Strategy<Value = (u64, u32)> {
        prop_oneof![Just((2, 2)), Just((7, 1)), Just((13, 1)), Just((2, 4)), Just((5, 2)), Just((19, 1))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn factorization_reconstructs((p, r) in fields(), raw in proptest::collection::vec(0u64..1 << 20, 1..10)) {
            let f = field(p, r);
            let coeffs = raw.iter().map(|&c| f.element_at(c % f.q())).collect();
            let g = Poly::new(&f, coeffs);
            prop_assume!(!g.is_zero());
            let fact = g.factor().unwrap();
            prop_assert_eq!(fact.reconstruct(), g.clone());
            for w in fact.factors.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for (h, _) in &fact.factors {
                prop_assert!(h.is_monic());
                prop_assert!(h.is_irreducible().unwrap());
            }
        }
    }
}
