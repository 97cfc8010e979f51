use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kummer_towers::classifier_criterion::{check_criterion, classify, Classification, CriterionVerdict, TowerSpec};
use kummer_towers::kummer_basic::BasicField;
use kummer_towers::rational_places::{enumerate_places, Place};
use kummer_towers::{FiniteField, Poly};

fn field(p: u64, r: u32) -> FiniteField {
    FiniteField::new(p, r).unwrap()
}

fn random_poly(fq: &FiniteField, rng: &mut ChaCha8Rng, max_degree: usize) -> Poly {
    let degree = rng.gen_range(1..=max_degree);
    let mut coeffs: Vec<_> = (0..=degree).map(|_| fq.element_at(rng.gen_range(0..fq.q()))).collect();
    if coeffs[degree].is_zero() {
        coeffs[degree] = fq.one();
    }
    Poly::new(fq, coeffs)
}

fn rational_critical_point(bf: &BasicField) -> bool {
    !bf.u_derivative().roots_in_field().unwrap().is_empty()
}

#[test]
fn factorizations_reconstruct() {
    for (p, r) in [(2, 2), (7, 1), (13, 1), (5, 2)] {
        let fq = field(p, r);
        let mut rng = ChaCha8Rng::seed_from_u64(p * 100 + r as u64);
        for _ in 0..10_000 {
            let g = random_poly(&fq, &mut rng, 6);
            let fac = g.factor().unwrap();
            assert_eq!(fac.reconstruct(), g, "F_{}: {g}", fq.q());
            for (h, m) in &fac.factors {
                assert!(h.is_monic() && *m >= 1);
                assert!(h.is_irreducible().unwrap(), "F_{}: factor {h} of {g}", fq.q());
            }
        }
    }
}

#[test]
fn fundamental_identity_above_small_places() {
    for (p, r, max_degree) in [(2, 2, 3), (7, 1, 3), (13, 1, 2)] {
        let fq = field(p, r);
        let places = enumerate_places(&fq, max_degree);
        for spec in TowerSpec::sweep(&fq) {
            let bf = spec.basic_field().unwrap();
            for place in &places {
                let sum: u32 = bf.places_above_x(place).iter().map(|q| q.e() * q.f()).sum();
                assert_eq!(sum, 3, "F_{} b = {} c = {} over {place}", fq.q(), spec.b, spec.c);
            }
        }
    }
}

#[test]
fn tame_different_over_x() {
    for (p, r) in [(2, 2), (7, 1), (13, 1), (2, 4)] {
        let fq = field(p, r);
        for spec in TowerSpec::sweep(&fq) {
            let bf = spec.basic_field().unwrap();
            let diff = bf.different_over_x();
            let ramified = bf.ramified_below_x();
            assert_eq!(diff.support().count(), ramified.len());
            for (q, coeff) in diff.terms() {
                assert_eq!((q.e(), coeff), (3, 2));
                assert!(ramified.contains(q.below()));
            }
            assert_eq!(diff.degree(), 2 * bf.genus() as i64 + 4);
        }
    }
}

#[test]
fn odd_degree_set_iff_rational_critical_point() {
    for (p, r) in [(2, 2), (7, 1), (13, 1), (2, 4), (19, 1)] {
        let fq = field(p, r);
        for spec in TowerSpec::sweep(&fq).into_iter().filter(|s| classify(s) == Classification::IrreducibleInfiniteGenus) {
            let bf = spec.basic_field().unwrap();
            let n = bf.degree_set_n().unwrap();
            let odd = n.iter().all(|m| m % 2 == 1);
            assert_eq!(odd, rational_critical_point(&bf), "F_{} f = {}: N = {n:?}", fq.q(), bf.f());
            if !odd {
                assert!(n.iter().all(|m| [2, 6].contains(m)), "F_{} f = {}: N = {n:?}", fq.q(), bf.f());
            }
        }
    }
}

#[test]
fn criterion_verdicts_are_sound() {
    for (p, r) in [(2, 2), (7, 1), (13, 1)] {
        let fq = field(p, r);
        for spec in TowerSpec::sweep(&fq) {
            let verdict = check_criterion(&spec, 4).unwrap();
            let irreducible = classify(&spec) == Classification::IrreducibleInfiniteGenus;
            match &verdict {
                CriterionVerdict::InfiniteGenus { d, witness, n } => {
                    assert!(irreducible);
                    assert_eq!(*d, 2);
                    assert!(n.iter().all(|m| m % 2 == 1));
                    assert!(witness.degree() <= 4 && !matches!(witness, Place::Infinity));
                }
                CriterionVerdict::NotApplicable { .. } => {
                    let bf = spec.basic_field().unwrap();
                    assert!(!irreducible || !rational_critical_point(&bf), "F_{} b = {} c = {}", fq.q(), spec.b, spec.c);
                }
            }
        }
    }
}

#[test]
fn class_counts() {
    for (p, r) in [(2, 2), (7, 1), (13, 1), (2, 4), (19, 1), (5, 2)] {
        let fq = field(p, r);
        let q = fq.q() as usize;
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for spec in TowerSpec::sweep(&fq) {
            *counts.entry(classify(&spec).tag()).or_default() += 1;
        }
        let expected = BTreeMap::from([
            ("irreducible_infinite_genus", q * (q - 1) / 2),
            ("type1", (q - 1) * (q - 2) / 2),
            ("type2", q - 1),
            ("type3", q - 1),
        ]);
        assert_eq!(counts, expected, "F_{q}");
    }
}
