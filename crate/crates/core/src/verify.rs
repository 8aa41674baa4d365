//! Brute-force cross-checks of systems over all permutations up to a size.
//!
//! Membership in restrictions and terms is decided directly from the
//! definitions (pattern containment and one level of decomposition), never
//! from the equations under test. Pattern containment is cached per
//! pattern over the whole universe.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::builder::{ambiguous_system, ClassInput};
use crate::decomp::{split, Root};
use crate::disambiguate::disambiguate_system;
use crate::engine::{count_coefficients, prune_unproductive};
use crate::error::Result;
use crate::format::{parse_system, serialize_system};
use crate::ir::{Equation, Flavor, Mode, Restriction, RestrictionTerm, System};
use crate::perm::{all_perms, Perm};

/// Every permutation of size `1..=max`, with its decomposition and its
/// membership in the closure of a fixed set of simple permutations.
pub struct Universe {
    max: usize,
    perms: Vec<Perm>,
    splits: Vec<Option<(Root, Vec<usize>)>>,
    in_closure: Vec<bool>,
}

/// Membership vectors of a set of restrictions.
pub struct Membership {
    bits: HashMap<Restriction, Vec<bool>>,
}

impl Universe {
    pub fn new(max: usize, simples: &[Perm]) -> Universe {
        let perms: Vec<Perm> = (1..=max).flat_map(all_perms).collect();
        let index: HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let splits: Vec<Option<(Root, Vec<usize>)>> = perms
            .par_iter()
            .map(|p| split(p).map(|(root, blocks)| (root, blocks.iter().map(|b| index[b]).collect())))
            .collect();
        let simples: BTreeSet<&Perm> = simples.iter().collect();
        // blocks are smaller than their host, so size order suffices
        let mut in_closure = vec![false; perms.len()];
        for i in 0..perms.len() {
            in_closure[i] = match &splits[i] {
                None => true,
                Some((root, blocks)) => {
                    let root_ok = match root {
                        Root::Simple(s) => simples.contains(s),
                        _ => true,
                    };
                    root_ok && blocks.iter().all(|&b| in_closure[b])
                }
            };
        }
        Universe {
            max,
            perms,
            splits,
            in_closure,
        }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn in_closure(&self, i: usize) -> bool {
        self.in_closure[i]
    }

    fn flavor_ok(&self, flavor: Flavor, i: usize) -> bool {
        !matches!(
            (flavor, &self.splits[i]),
            (Flavor::Plus, Some((Root::Inc, _))) | (Flavor::Minus, Some((Root::Dec, _)))
        )
    }

    /// Decides membership in every given restriction.
    pub fn membership<'a>(&self, restrictions: impl IntoIterator<Item = &'a Restriction>) -> Membership {
        let restrictions: BTreeSet<&Restriction> = restrictions.into_iter().collect();
        let patterns: BTreeSet<&Perm> = restrictions.iter().flat_map(|r| r.patterns()).collect();
        let contains: HashMap<&Perm, Vec<bool>> = patterns
            .into_par_iter()
            .map(|pat| (pat, self.perms.iter().map(|q| q.contains(pat)).collect()))
            .collect();
        let bits = restrictions
            .into_par_iter()
            .map(|r| {
                let v = (0..self.perms.len())
                    .map(|i| {
                        !r.is_empty()
                            && self.in_closure[i]
                            && self.flavor_ok(r.flavor(), i)
                            && r.avoid().iter().all(|e| !contains[e][i])
                            && r.contain().iter().all(|a| contains[a][i])
                    })
                    .collect();
                (r.clone(), v)
            })
            .collect();
        Membership { bits }
    }

    fn term_admits(&self, m: &Membership, t: &RestrictionTerm, i: usize) -> bool {
        match &self.splits[i] {
            Some((root, blocks)) if root == t.root() => t.args().iter().zip(blocks).all(|(a, &b)| m.bits[a][b]),
            _ => false,
        }
    }

    /// Number of summands of `eq` containing permutation `i`.
    fn hits(&self, m: &Membership, eq: &Equation, i: usize) -> usize {
        let atom = usize::from(eq.has_atom && self.perms[i].len() == 1);
        atom + eq.terms.iter().filter(|t| self.term_admits(m, t, i)).count()
    }
}

impl Membership {
    pub fn admits(&self, r: &Restriction, i: usize) -> bool {
        self.bits[r][i]
    }
}

fn system_restrictions(sys: &System) -> BTreeSet<&Restriction> {
    let mut out: BTreeSet<&Restriction> = BTreeSet::new();
    out.insert(&sys.root);
    for eq in sys.equations.values() {
        out.insert(&eq.lhs);
        for t in &eq.terms {
            out.extend(t.args());
        }
    }
    out
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} checked, {} violations)",
            self.name,
            self.checked,
            self.violations.len()
        )?;
        for v in self.violations.iter().take(5) {
            write!(f, "\n    {v}")?;
        }
        Ok(())
    }
}

const MAX_REPORTED: usize = 50;

fn push(violations: &mut Vec<String>, v: impl FnOnce() -> String) {
    if violations.len() < MAX_REPORTED {
        violations.push(v());
    }
}

/// Every equation describes its left-hand side: in disjoint mode each
/// member lies in exactly one summand, in ambiguous mode in at least one,
/// and no non-member lies in any summand.
pub fn check_equations(sys: &System, u: &Universe) -> Report {
    let m = u.membership(system_restrictions(sys));
    let mut violations = Vec::new();
    let mut checked = 0;
    for eq in sys.equations.values() {
        for i in 0..u.perms.len() {
            let inside = m.admits(&eq.lhs, i);
            let h = u.hits(&m, eq, i);
            checked += 1;
            let ok = match sys.mode {
                Mode::Disjoint => h == usize::from(inside),
                Mode::Ambiguous => (h > 0) == inside,
            };
            if !ok {
                push(&mut violations, || {
                    format!("{}: {} lies in {h} summands", eq.lhs, u.perms[i])
                });
            }
        }
    }
    let name = match sys.mode {
        Mode::Disjoint => "partition",
        Mode::Ambiguous => "soundness",
    };
    Report {
        name: name.into(),
        checked,
        violations,
    }
}

/// Every equation of `before` describes the same set as its counterpart in
/// `after`.
pub fn check_conservation(before: &System, after: &System, u: &Universe) -> Report {
    let mut all = system_restrictions(before);
    all.extend(system_restrictions(after));
    let m = u.membership(all);
    let mut violations = Vec::new();
    let mut checked = 0;
    for (lhs, eq) in &before.equations {
        let Some(other) = after.equations.get(lhs) else {
            push(&mut violations, || format!("{lhs} is missing after disambiguation"));
            continue;
        };
        for i in 0..u.perms.len() {
            checked += 1;
            let a = u.hits(&m, eq, i) > 0;
            let b = u.hits(&m, other, i) > 0;
            if a != b || a != m.admits(lhs, i) {
                push(&mut violations, || format!("{lhs}: {} changed membership", u.perms[i]));
            }
        }
    }
    Report {
        name: "conservation".into(),
        checked,
        violations,
    }
}

/// Coefficients of every nonterminal against direct enumeration, and those
/// of the root against the avoiders of the basis.
pub fn check_counts(sys: &System, u: &Universe) -> Result<Report> {
    let table = count_coefficients(sys, u.max)?;
    let g = table.grammar();
    let m = u.membership(g.names.iter());
    let mut violations = Vec::new();
    let mut checked = 0;
    for (s, name) in g.names.iter().enumerate() {
        let mut want = vec![0u64; u.max + 1];
        for (i, q) in u.perms.iter().enumerate() {
            if m.admits(name, i) {
                want[q.len()] += 1;
            }
        }
        for n in 1..=u.max {
            checked += 1;
            if *table.count(s, n) != BigUint::from(want[n]) {
                push(&mut violations, || {
                    format!("{name} at size {n}: {} vs {}", table.count(s, n), want[n])
                });
            }
        }
    }
    if !sys.basis.is_empty() {
        let mut want = vec![0u64; u.max + 1];
        for q in &u.perms {
            if q.avoids_all(&sys.basis) {
                want[q.len()] += 1;
            }
        }
        for n in 1..=u.max {
            checked += 1;
            let got = table.count(g.root, n);
            if *got != BigUint::from(want[n]) {
                push(&mut violations, || format!("class at size {n}: {got} vs {}", want[n]));
            }
        }
    }
    Ok(Report {
        name: "counts".into(),
        checked,
        violations,
    })
}

pub fn check_round_trip(sys: &System) -> Report {
    let text = serialize_system(sys);
    let mut violations = Vec::new();
    match parse_system(&text) {
        Ok(back) if back == *sys => {}
        Ok(_) => violations.push("parsed system differs".into()),
        Err(e) => violations.push(e.to_string()),
    }
    Report {
        name: "round trip".into(),
        checked: sys.equations.len(),
        violations,
    }
}

/// Builds the specification of the class and runs every check up to size
/// `max`.
pub fn check_class(input: &ClassInput, max: usize) -> Result<Vec<Report>> {
    let amb = ambiguous_system(input)?;
    let spec = disambiguate_system(&amb)?;
    let pruned = prune_unproductive(&spec);
    let u = Universe::new(max, input.simples());
    Ok(vec![
        check_equations(&amb, &u),
        check_equations(&spec, &u),
        check_conservation(&amb, &spec, &u),
        check_counts(&spec, &u)?,
        Report {
            name: "counts after pruning".into(),
            ..check_counts(&pruned, &u)?
        },
        Report {
            name: "round trip (ambiguous)".into(),
            ..check_round_trip(&amb)
        },
        Report {
            name: "round trip (disjoint)".into(),
            ..check_round_trip(&spec)
        },
    ])
}
