use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{is_prime, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MawuReport {
    pub limit: u64,
    /// Primes `p <= limit` with `p = 1` or `7 mod 12`.
    pub primes_checked: u64,
    /// Primes with `p != 1 mod 3`.
    pub not_one_mod_three: Vec<u64>,
    /// Primes where `-3^-1` is not a square.
    pub not_square: Vec<u64>,
}

impl MawuReport {
    pub fn violations(&self) -> usize {
        self.not_one_mod_three.len() + self.not_square.len()
    }
}

/// For every prime `p = 1, 7 mod 12` up to `limit`, checks `p = 1 mod 3` and
/// that `-3^-1` is a square mod `p`, so `x^2 + 3^-1` is never irreducible.
pub fn verify_mawu(limit: u64) -> Result<MawuReport> {
    if limit < 13 {
        return Err(Error::InvalidArgument(format!("prime limit {limit} is below 13")));
    }
    let mut report =
        MawuReport { limit, primes_checked: 0, not_one_mod_three: Vec::new(), not_square: Vec::new() };
    for p in (5..=limit).filter(|p| matches!(p % 12, 1 | 7) && is_prime(*p)) {
        report.primes_checked += 1;
        if p % 3 != 1 {
            report.not_one_mod_three.push(p);
        }
        let fp = FiniteField::with_bound(p, 1, u64::MAX)?;
        let minus_third = -fp.from_int(3).inv()?;
        if !minus_third.is_square() {
            report.not_square.push(p);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_by_hand() {
        for (p, inverse, root) in [(13, 9, 2), (7, 5, 3)] {
            let fp = FiniteField::new(p, 1).unwrap();
            assert_eq!(fp.from_int(3).inv().unwrap(), fp.from_int(inverse));
            assert_eq!(-fp.from_int(inverse), fp.from_int(root * root));
        }
    }

    #[test]
    fn sweep_has_no_violations() {
        let report = verify_mawu(1000).unwrap();
        assert_eq!(report.violations(), 0);
        // 7, 13, 19, 31, 37, 43, ...
        assert!(report.primes_checked > 70);
        assert!(verify_mawu(12).is_err());
    }
}
