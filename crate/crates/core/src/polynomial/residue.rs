use super::Poly;
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldOps, FiniteField};

/// `F_q[x]/(pi)` for a monic irreducible `pi`: the residue field of the place
/// `P_pi`. Elements are reduced polynomials; `pi = x` gives `F_q` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    base: FiniteField,
    modulus: Poly,
}

impl ResidueField {
    pub fn new(modulus: &Poly) -> Result<Self> {
        match modulus.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            Some(_) => {}
        }
        Ok(ResidueField { base: modulus.field().clone(), modulus: modulus.monic() })
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("non-constant modulus")
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus).expect("nonzero modulus")
    }

    pub fn embed(&self, c: &FieldElement) -> Poly {
        Poly::constant(c.clone())
    }

    /// The class of `x`.
    pub fn generator(&self) -> Poly {
        self.reduce(&Poly::x(&self.base))
    }

    /// Image of an element lying in the base field, if it does.
    pub fn to_base(&self, a: &Poly) -> Option<FieldElement> {
        a.is_constant().then(|| a.coeff(0))
    }

    pub fn frobenius(&self, a: &Poly) -> Poly {
        self.pow(a, self.base.q() as u128)
    }

    /// Minimal polynomial over the base field, from the Frobenius orbit of `a`.
    pub fn min_poly(&self, a: &Poly) -> Poly {
        let mut orbit = vec![a.clone()];
        loop {
            let next = self.frobenius(orbit.last().expect("nonempty"));
            if next == *a {
                break;
            }
            orbit.push(next);
        }
        // Coefficients of prod (T - z) live in the residue field, low degree first.
        let mut prod = vec![self.one()];
        for z in &orbit {
            let mut next = vec![self.zero(); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                next[i] = self.sub(&next[i], &self.mul(c, z));
            }
            prod = next;
        }
        let coeffs = prod
            .iter()
            .map(|c| self.to_base(c).expect("Frobenius-stable coefficients lie in the base field"))
            .collect();
        Poly::new(&self.base, coeffs)
    }
}

impl FieldOps for ResidueField {
    type Elem = Poly;

    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn size(&self) -> u128 {
        (self.base.q() as u128).pow(self.degree() as u32)
    }
    fn zero(&self) -> Poly {
        Poly::zero(&self.base)
    }
    fn one(&self) -> Poly {
        Poly::one(&self.base)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a - b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&(a * b))
    }
    fn neg(&self, a: &Poly) -> Poly {
        -a
    }
    fn inv(&self, a: &Poly) -> Option<Poly> {
        if a.is_zero() {
            return None;
        }
        // Extended Euclid against the modulus.
        let (mut r0, mut r1) = (self.modulus.clone(), self.reduce(a));
        let (mut s0, mut s1) = (Poly::zero(&self.base), Poly::one(&self.base));
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1).ok()?;
            let s2 = &s0 - &(&quot * &s1);
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
        }
        let lc_inv = r0.leading()?.inv().ok()?;
        Some(self.reduce(&s0.scale(&lc_inv)))
    }
    fn element(&self, mut index: u128) -> Poly {
        let q = self.base.q() as u128;
        let coeffs = (0..self.degree())
            .map(|_| {
                let c = self.base.element_at((index % q) as u64);
                index /= q;
                c
            })
            .collect();
        Poly::new(&self.base, coeffs)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_min_poly() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let k = ResidueField::new(&Poly::from_ints(&f7, &[1, 0, 1])).unwrap();
        assert_eq!(k.size(), 49);
        for i in 1..49 {
            let a = k.element(i);
            let inv = k.inv(&a).unwrap();
            assert!(k.mul(&a, &inv).is_one());
        }
        assert_eq!(k.min_poly(&k.generator()), Poly::from_ints(&f7, &[1, 0, 1]));
        assert_eq!(k.min_poly(&k.embed(&f7.from_int(3))), Poly::from_ints(&f7, &[-3, 1]));
    }

    #[test]
    fn cube_roots_in_quadratic_residue_field() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let k = ResidueField::new(&Poly::from_ints(&f7, &[1, 0, 1])).unwrap();
        let mut total = 0;
        for i in 0..49 {
            let a = k.element(i);
            let roots = k.cube_roots(&a);
            for z in &roots {
                assert_eq!(k.mul(&k.mul(z, z), z), a);
            }
            total += roots.len();
        }
        assert_eq!(total, 49);
    }

    #[test]
    fn degree_one_modulus_is_the_base_field() {
        let f13 = FiniteField::new(13, 1).unwrap();
        let k = ResidueField::new(&Poly::x(&f13)).unwrap();
        assert_eq!(k.size(), 13);
        assert!(k.generator().is_zero());
        assert_eq!(ResidueField::new(&Poly::one(&f13)).unwrap_err(), Error::ConstantPolynomial);
    }
}
