//! The simple permutations of `Av(B)`, by breadth-first extension.
//!
//! Every simple permutation of size `m >= 5` contains a simple permutation
//! of size `m - 1` or `m - 2`. Starting from the simple avoiders of size 4,
//! each size is therefore reached by inserting one value into the previous
//! level or two values into the level before it. Two consecutive empty
//! levels mean no larger simple avoider exists.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::perm::{all_perms, Perm};

pub const DEFAULT_SIMPLES_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplesStatus {
    Complete,
    /// The search reached this size with simple avoiders still appearing.
    Truncated(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplesResult {
    pub simples: Vec<Perm>,
    pub status: SimplesStatus,
    /// Largest size that was searched.
    pub reached: usize,
}

impl SimplesResult {
    pub fn is_complete(&self) -> bool {
        self.status == SimplesStatus::Complete
    }
}

pub fn compute_simples(basis: &[Perm], cap: usize) -> SimplesResult {
    let levels = simple_levels(basis, cap);
    let reached = levels.len() - 1;
    let complete = reached >= 5 && levels[reached].is_empty() && levels[reached - 1].is_empty();
    let simples = levels.into_iter().flatten().collect();
    SimplesResult {
        simples,
        status: if complete {
            SimplesStatus::Complete
        } else {
            SimplesStatus::Truncated(cap)
        },
        reached,
    }
}

/// `levels[m]` holds the simple avoiders of size `m`; the vector stops at
/// the first size closing two empty levels, or at `cap`.
pub(crate) fn simple_levels(basis: &[Perm], cap: usize) -> Vec<Vec<Perm>> {
    let mut levels: Vec<Vec<Perm>> = vec![Vec::new(); 4];
    levels.push(
        all_perms(4)
            .into_iter()
            .filter(|p| p.is_simple() && p.avoids_all(basis))
            .collect(),
    );
    for size in 5..=cap.max(5) {
        let mut candidates: BTreeSet<Perm> = BTreeSet::new();
        for p in &levels[size - 1] {
            candidates.extend(p.one_point_extensions());
        }
        // intermediates need not be simple, but they are patterns of an
        // avoider and must avoid the basis themselves
        let mids: BTreeSet<Perm> = levels[size - 2]
            .par_iter()
            .flat_map_iter(|p| p.one_point_extensions())
            .filter(|q| q.avoids_all(basis))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        for q in &mids {
            candidates.extend(q.one_point_extensions());
        }
        let candidates: Vec<Perm> = candidates.into_iter().collect();
        let found: Vec<Perm> = candidates
            .into_par_iter()
            .filter(|q| q.is_simple() && q.avoids_all(basis))
            .collect();
        levels.push(found);
        if levels[size].is_empty() && levels[size - 1].is_empty() {
            break;
        }
    }
    levels
}

/// Parses a simples file: one permutation per line, `#` comments.
pub fn parse_perm_list(text: &str) -> crate::error::Result<Vec<Perm>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let p = line.parse::<Perm>().map_err(|e| crate::error::Error::Format {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn brute(basis: &[Perm], max: usize) -> Vec<Perm> {
        (4..=max)
            .flat_map(all_perms)
            .filter(|q| q.is_simple() && q.avoids_all(basis))
            .collect()
    }

    #[test]
    fn paper_basis_has_one_simple() {
        let b = [p("1243"), p("2413"), p("531642"), p("41352")];
        let r = compute_simples(&b, 12);
        assert_eq!(r.simples, vec![p("3142")]);
        assert_eq!(r.status, SimplesStatus::Complete);
        assert_eq!(r.reached, 6);
    }

    #[test]
    fn separable_class_has_none() {
        let r = compute_simples(&[p("2413"), p("3142")], 12);
        assert!(r.simples.is_empty());
        assert!(r.is_complete());
    }

    #[test]
    fn av123_is_truncated() {
        let r = compute_simples(&[p("123")], 8);
        assert_eq!(r.status, SimplesStatus::Truncated(8));
        assert!(r.simples.contains(&p("3142")));
        assert!(r.simples.contains(&p("35142")));
        assert_eq!(r.reached, 8);
    }

    #[test]
    fn agrees_with_exhaustive_scan() {
        for basis in [
            vec![p("123")],
            vec![p("321")],
            vec![p("2413")],
            vec![p("1243"), p("2413"), p("531642"), p("41352")],
            vec![p("4321"), p("3142")],
            vec![p("25314")],
        ] {
            let r = compute_simples(&basis, 8);
            let mut want = brute(&basis, r.reached.min(8));
            want.sort();
            assert_eq!(r.simples, want, "{basis:?}");
        }
    }

    #[test]
    fn every_level_is_reachable_from_smaller_simples() {
        let basis = [p("123")];
        let levels = simple_levels(&basis, 8);
        for m in 5..levels.len() {
            for q in &levels[m] {
                let from_prev = levels[m - 1].iter().any(|s| q.contains(s));
                let from_prev2 = levels[m - 2].iter().any(|s| q.contains(s));
                assert!(from_prev || from_prev2, "{q}");
            }
        }
    }

    #[test]
    fn perm_list_parsing() {
        let v = parse_perm_list("# header\n3 1 4 2\n\n2413 # trailing\n").unwrap();
        assert_eq!(v, vec![p("3142"), p("2413")]);
        assert!(parse_perm_list("3 3 1").is_err());
    }
}
