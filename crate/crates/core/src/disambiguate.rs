//! Turning the ambiguous system into a specification with disjoint unions.
//!
//! Summands with different roots are disjoint already. Summands sharing a
//! root are grouped by overlap, and a group `t_1, ..., t_k` is replaced by
//! the disjoint union over nonempty `X ⊆ [k]` of the terms
//! `⋂_{i∈X} t_i ∩ ⋂_{i∉X} t̄_i`, complements being expanded componentwise.
//! The new restrictions this introduces (they may carry mandatory
//! patterns) get their own equations, which are disambiguated in turn.

use std::collections::BTreeMap;

use crate::builder::{add_constraints, close_over, closure_equation};
use crate::decomp::Root;
use crate::embedding::embeddings;
use crate::error::Result;
use crate::ir::{prune_subsumed, Equation, Mode, Restriction, RestrictionTerm, System};
use crate::perm::{GenArg, Perm};

/// `t(γ)`: the members of `t` containing `γ`, one term per embedding of
/// `γ` in the root of `t`. The union is possibly ambiguous; statically
/// empty terms are kept and left to the caller.
pub fn add_mandatory(t: &RestrictionTerm, gamma: &Perm) -> Vec<RestrictionTerm> {
    let root = t.root().perm();
    embeddings(gamma, &root)
        .iter()
        .map(|e| {
            let mut term = t.clone();
            for (k, block) in e.induced(gamma).into_iter().enumerate() {
                if let GenArg::Perm(b) = block {
                    term = term.with_arg(k, term.args()[k].with_contain(b));
                }
            }
            term
        })
        .collect()
}

/// Equation of an arbitrary restriction: the closure equation of its
/// flavor, with its avoided patterns then its mandatory patterns pushed
/// into the components. The result is a possibly ambiguous union.
pub fn compute_eqn_for_restriction(lhs: &Restriction, simples: &[Perm]) -> Equation {
    if lhs.is_empty() {
        return Equation {
            lhs: lhs.clone(),
            has_atom: false,
            terms: Vec::new(),
            mode: Mode::Ambiguous,
        };
    }
    let base = closure_equation(lhs.flavor(), simples);
    let mut terms: Vec<RestrictionTerm> = base
        .terms
        .iter()
        .flat_map(|t| add_constraints(t, lhs.avoid()))
        .collect();
    terms = prune_subsumed(terms);
    for gamma in lhs.contain() {
        let next: Vec<RestrictionTerm> = terms.iter().flat_map(|t| add_mandatory(t, gamma)).collect();
        terms = prune_subsumed(next);
    }
    Equation {
        lhs: lhs.clone(),
        has_atom: lhs.admits_atom(),
        terms,
        mode: Mode::Ambiguous,
    }
}

/// Rewrites every ambiguous root group of `eq` as a disjoint union.
pub fn disambiguate_equation(eq: &Equation) -> Equation {
    let mut by_root: BTreeMap<Root, Vec<RestrictionTerm>> = BTreeMap::new();
    for t in prune_subsumed(eq.terms.clone()) {
        by_root.entry(t.root().clone()).or_default().push(t);
    }
    let mut terms = Vec::new();
    for group in by_root.into_values() {
        for component in overlap_components(group) {
            if component.len() == 1 {
                terms.extend(component);
            } else {
                terms.extend(disjoint_union(&component));
            }
        }
    }
    let mut out = Equation {
        lhs: eq.lhs.clone(),
        has_atom: eq.has_atom,
        terms,
        mode: Mode::Disjoint,
    };
    out.canonicalize();
    out
}

/// Splits same-root terms into classes of the transitive closure of "may
/// intersect". Terms of different classes are disjoint.
fn overlap_components(terms: Vec<RestrictionTerm>) -> Vec<Vec<RestrictionTerm>> {
    let n = terms.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if terms[i].intersect(&terms[j]).is_some() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<RestrictionTerm>> = BTreeMap::new();
    for (i, t) in terms.into_iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(t);
    }
    classes.into_values().collect()
}

/// The disjoint union over nonempty `X`, enumerated as a decision tree on
/// `i ∈ X` so that branches whose partial intersection is statically empty
/// are cut early. A piece statically disjoint from `t_i` already lies in
/// `t̄_i` and is kept whole instead of being split.
fn disjoint_union(terms: &[RestrictionTerm]) -> Vec<RestrictionTerm> {
    let complements: Vec<Vec<RestrictionTerm>> = terms.iter().map(RestrictionTerm::complement).collect();
    let mut out = Vec::new();
    let start = RestrictionTerm::unconstrained(terms[0].root().clone());
    expand(terms, &complements, 0, vec![start], false, &mut out);
    out
}

fn expand(
    terms: &[RestrictionTerm],
    complements: &[Vec<RestrictionTerm>],
    i: usize,
    family: Vec<RestrictionTerm>,
    chosen: bool,
    out: &mut Vec<RestrictionTerm>,
) {
    if family.is_empty() {
        return;
    }
    if i == terms.len() {
        if chosen {
            out.extend(family);
        }
        return;
    }
    let inside: Vec<RestrictionTerm> = family.iter().filter_map(|f| f.intersect(&terms[i])).collect();
    expand(terms, complements, i + 1, inside, true, out);
    let mut outside = Vec::new();
    for f in &family {
        if f.intersect(&terms[i]).is_none() {
            outside.push(f.clone());
        } else {
            outside.extend(complements[i].iter().filter_map(|c| f.intersect(c)));
        }
    }
    expand(terms, complements, i + 1, outside, chosen, out);
}

/// Disambiguates every equation and closes the system over the new
/// restrictions. A system that is already disjoint is returned unchanged.
pub fn disambiguate_system(sys: &System) -> Result<System> {
    if sys.mode == Mode::Disjoint {
        return Ok(sys.clone());
    }
    let equations = close_over(sys.equations.keys().cloned(), |r| {
        Ok(match sys.equations.get(r) {
            Some(eq) => disambiguate_equation(eq),
            None => disambiguate_equation(&compute_eqn_for_restriction(r, &sys.simples)),
        })
    })?;
    Ok(System {
        root: sys.root.clone(),
        equations,
        basis: sys.basis.clone(),
        simples: sys.simples.clone(),
        mode: Mode::Disjoint,
    })
}
