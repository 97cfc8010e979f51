//! Ramification, genus and classification of cubic Kummer towers
//! `y^3 = x f(x)` over finite fields `F_q` with `q = 1 mod 3`.

pub mod error;
pub mod classifier_criterion;
pub mod cli;
pub mod finite_field;
pub mod kummer_basic;
pub mod polynomial;
pub mod rational_places;
pub mod tower_census;

pub use error::{Error, Result};
pub use finite_field::{make_field, FieldElement, FieldOps, FieldSpec, FiniteField};
pub use polynomial::{Factorization, Poly, ResidueField};
