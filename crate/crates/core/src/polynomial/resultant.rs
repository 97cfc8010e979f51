use super::Poly;
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldOps};

impl Poly {
    /// `Res(self, other)` by the Euclidean recurrence.
    pub fn resultant(&self, other: &Poly) -> Result<FieldElement> {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Err(Error::ZeroPolynomial);
        };
        if n == 0 {
            return Ok(other.coeff(0).pow(m as u128));
        }
        if m == 0 {
            return Ok(self.coeff(0).pow(n as u128));
        }
        let r = self.rem(other)?;
        let Some(k) = r.degree() else {
            return Ok(self.field().zero());
        };
        // Res(a, b) = (-1)^(mn) lc(b)^(m - deg r) Res(b, a mod b)
        let lc = other.leading().expect("nonzero");
        let mut out = &lc.pow((m - k) as u128) * &other.resultant(&r)?;
        if (m * n) % 2 == 1 {
            out = -out;
        }
        Ok(out)
    }

    /// `(-1)^(n(n-1)/2) Res_{n,n-1}(f, f') / lc(f)`, the formal degree of `f'`
    /// being `n - 1` even when it drops in positive characteristic.
    pub fn discriminant(&self) -> Result<FieldElement> {
        let n = match self.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        let field = self.field();
        let df = self.derivative();
        let Some(dd) = df.degree() else {
            return Ok(field.zero());
        };
        let lc = self.leading().expect("nonzero");
        let res = &lc.pow((n - 1 - dd) as u128) * &self.resultant(&df)?;
        let mut disc = &res / lc;
        if (n * (n - 1) / 2) % 2 == 1 {
            disc = -disc;
        }
        Ok(disc)
    }
}

/// Resultant as the Sylvester determinant over any field, with formal degrees
/// `a.len() - 1` and `b.len() - 1` (coefficients low degree first).
pub fn sylvester_resultant<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    assert!(!a.is_empty() && !b.is_empty(), "formal degree must be nonnegative");
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return field.one();
    }
    let mut matrix = vec![vec![field.zero(); size]; size];
    for row in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            matrix[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            matrix[n + row][row + j] = c.clone();
        }
    }
    determinant(field, matrix)
}

fn determinant<F: FieldOps>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !field.is_zero(&m[r][col])) else {
            return field.zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[col][col]);
        let inv = field.inv(&m[col][col]).expect("nonzero pivot");
        for r in col + 1..n {
            if field.is_zero(&m[r][col]) {
                continue;
            }
            let factor = field.mul(&m[r][col], &inv);
            let (top, bottom) = m.split_at_mut(r);
            for (target, pivot) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *target = field.sub(target, &field.mul(&factor, pivot));
            }
        }
    }
    det
}

/// Discriminant in `t` of `t^3 + a2 t^2 + a1 t + a0` whose coefficients are
/// polynomials in another variable:
/// `a2^2 a1^2 - 4 a1^3 - 4 a2^3 a0 - 27 a0^2 + 18 a2 a1 a0`.
pub fn discriminant_of_monic_cubic(a2: &Poly, a1: &Poly, a0: &Poly) -> Poly {
    let field = a2.field();
    let k = |n: i64| Poly::from_ints(field, &[n]);
    let terms = [
        &(a2 * a2) * &(a1 * a1),
        &k(-4) * &(&(a1 * a1) * a1),
        &k(-4) * &(&(&(a2 * a2) * a2) * a0),
        &k(-27) * &(a0 * a0),
        &k(18) * &(&(a2 * a1) * a0),
    ];
    terms.iter().fold(Poly::zero(field), |acc, t| &acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::FiniteField;
    use proptest::prelude::*;

    #[test]
    fn depressed_cubic_identity() {
        // disc(t^3 + p t + q) = -4p^3 - 27q^2, for every p, q over small fields.
        for (pr, r) in [(7, 1), (13, 1), (2, 2), (5, 2)] {
            let f = FiniteField::new(pr, r).unwrap();
            for p in f.elements() {
                for q in f.elements() {
                    let cubic = Poly::new(&f, vec![q.clone(), p.clone(), f.zero(), f.one()]);
                    let expected = &(&f.from_int(-4) * &p.pow(3)) - &(&f.from_int(27) * &q.pow(2));
                    assert_eq!(cubic.discriminant().unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn oracle_discriminant_for_x2_plus_1_over_f7() {
        // t*(t^2+1) - y^3 has t-discriminant -4 - 27 y^6 = y^6 + 3 mod 7.
        let f7 = FiniteField::new(7, 1).unwrap();
        let y3 = Poly::from_ints(&f7, &[0, 0, 0, -1]);
        let d = discriminant_of_monic_cubic(&Poly::zero(&f7), &Poly::from_ints(&f7, &[1]), &y3);
        assert_eq!(d, Poly::from_ints(&f7, &[3, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn degenerate_degrees() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let lin = Poly::from_ints(&f7, &[2, 3]);
        assert_eq!(lin.discriminant().unwrap(), f7.one());
        assert_eq!(Poly::from_ints(&f7, &[4]).discriminant().unwrap_err(), Error::ConstantPolynomial);
        assert_eq!(lin.resultant(&Poly::zero(&f7)).unwrap_err(), Error::ZeroPolynomial);
    }

    proptest! {
        #[test]
        fn euclid_matches_sylvester(a in proptest::collection::vec(0i64..13, 1..7), b in proptest::collection::vec(0i64..13, 1..6)) {
            let f = FiniteField::new(13, 1).unwrap();
            let pa = Poly::from_ints(&f, &a);
            let pb = Poly::from_ints(&f, &b);
            prop_assume!(!pa.is_zero() && !pb.is_zero());
            let syl = sylvester_resultant(&f, pa.coeffs(), pb.coeffs());
            prop_assert_eq!(pa.resultant(&pb).unwrap(), syl);
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(a in proptest::collection::vec(0i64..7, 2..6), b in proptest::collection::vec(0i64..7, 2..6)) {
            let f = FiniteField::new(7, 1).unwrap();
            let pa = Poly::from_ints(&f, &a);
            let pb = Poly::from_ints(&f, &b);
            prop_assume!(!pa.is_zero() && !pb.is_zero());
            prop_assert_eq!(pa.resultant(&pb).unwrap().is_zero(), !pa.gcd(&pb).is_one());
        }
    }
}
