//! Exhaustive enumeration of `Av(B)`, the reference every other count is
//! checked against.

use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm};

pub const DEFAULT_ORACLE_CAP: usize = 10;

/// All permutations of size `n` avoiding every pattern of `basis`, sorted
/// lexicographically.
pub fn enumerate_avoiders(basis: &[Perm], n: usize) -> Result<Vec<Perm>> {
    enumerate_avoiders_capped(basis, n, DEFAULT_ORACLE_CAP)
}

pub fn enumerate_avoiders_capped(basis: &[Perm], n: usize, cap: usize) -> Result<Vec<Perm>> {
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(all_perms(n).into_iter().filter(|s| s.avoids_all(basis)).collect())
}

/// `|Av(B) ∩ S_n|` for `n = 1..=max`.
pub fn avoider_counts(basis: &[Perm], max: usize) -> Result<Vec<usize>> {
    (1..=max)
        .map(|n| enumerate_avoiders(basis, n).map(|v| v.len()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn catalan_at_four() {
        assert_eq!(enumerate_avoiders(&[p("132")], 4).unwrap().len(), 14);
    }

    #[test]
    fn only_decreasing_avoids_12() {
        assert_eq!(enumerate_avoiders(&[p("12")], 3).unwrap(), vec![p("321")]);
    }

    #[test]
    fn large_patterns_exclude_nothing_small() {
        let b = [p("1243"), p("2413"), p("531642"), p("41352")];
        assert_eq!(enumerate_avoiders(&b, 3).unwrap().len(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_avoiders(&[p("12")], 11),
            Err(Error::OracleCapExceeded { n: 11, cap: 10 })
        );
        assert!(enumerate_avoiders_capped(&[p("12")], 4, 4).is_ok());
        assert!(enumerate_avoiders_capped(&[p("12")], 5, 4).is_err());
    }

    #[test]
    fn output_is_sorted() {
        let v = enumerate_avoiders(&[p("231")], 5).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
