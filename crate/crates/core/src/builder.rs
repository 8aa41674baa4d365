//! The (possibly ambiguous) equation system of `Av(B)`.
//!
//! The class is `C<B*>`, where `B*` holds the non-simple basis elements and
//! `C` is the substitution closure of the class. Starting from the closure
//! equations, avoidance constraints are pushed from each term into its
//! components through the embeddings of every excluded pattern in the
//! term's root. New restrictions appearing on the right get their own
//! equations until the system is closed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::decomp::Root;
use crate::embedding::embeddings;
use crate::error::{Error, Result};
use crate::ir::{prune_subsumed, Equation, Flavor, Mode, Restriction, RestrictionTerm, System};
use crate::perm::{GenArg, Perm};
use crate::simples::SimplesResult;

/// Hard limit on the number of equations of a system.
pub const MAX_EQUATIONS: usize = 200_000;

/// A basis together with the simple permutations of its class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInput {
    basis: Vec<Perm>,
    basis_star: Vec<Perm>,
    simples: Vec<Perm>,
}

impl ClassInput {
    pub fn new(basis: Vec<Perm>, simples: Vec<Perm>) -> Result<ClassInput> {
        let (basis, _) = minimize_basis(basis)?;
        let mut simples = simples;
        simples.sort();
        simples.dedup();
        for s in &simples {
            if !s.is_simple() {
                return Err(Error::NotSimple(s.clone()));
            }
            if let Some(b) = basis.iter().find(|b| s.contains(b)) {
                return Err(Error::SimpleNotInClass {
                    simple: s.clone(),
                    pattern: b.clone(),
                });
            }
        }
        let basis_star = basis.iter().filter(|b| !b.is_simple()).cloned().collect();
        Ok(ClassInput {
            basis,
            basis_star,
            simples,
        })
    }

    /// Refuses a truncated simple-permutation search.
    pub fn from_search(basis: Vec<Perm>, found: &SimplesResult) -> Result<ClassInput> {
        if let crate::simples::SimplesStatus::Truncated(cap) = found.status {
            return Err(Error::SimplesTruncated { cap });
        }
        ClassInput::new(basis, found.simples.clone())
    }

    pub fn basis(&self) -> &[Perm] {
        &self.basis
    }

    pub fn basis_star(&self) -> &[Perm] {
        &self.basis_star
    }

    pub fn simples(&self) -> &[Perm] {
        &self.simples
    }
}

/// Reduces `basis` to the antichain of its minimal elements. The flag
/// reports whether anything was removed.
pub fn minimize_basis(basis: Vec<Perm>) -> Result<(Vec<Perm>, bool)> {
    if basis.is_empty() {
        return Err(Error::InvalidInput("the basis is empty".into()));
    }
    if let Some(b) = basis.iter().find(|b| b.len() < 2) {
        return Err(Error::InvalidInput(format!("basis element {b} has size below 2")));
    }
    let mut sorted = basis.clone();
    sorted.sort();
    sorted.dedup();
    let minimal: Vec<Perm> = sorted
        .iter()
        .enumerate()
        .filter(|(i, p)| !sorted[..*i].iter().any(|q| p.contains(q)))
        .map(|(_, p)| p.clone())
        .collect();
    let changed = minimal.len() != basis.len();
    Ok((minimal, changed))
}

/// The closure equation for one flavor: the atom, `12[C+, C]` unless the
/// flavor is `Plus`, `21[C-, C]` unless it is `Minus`, and one
/// unconstrained term per simple permutation.
pub fn closure_equation(flavor: Flavor, simples: &[Perm]) -> Equation {
    let mut terms = Vec::new();
    if flavor != Flavor::Plus {
        terms.push(RestrictionTerm::unconstrained(Root::Inc));
    }
    if flavor != Flavor::Minus {
        terms.push(RestrictionTerm::unconstrained(Root::Dec));
    }
    terms.extend(
        simples
            .iter()
            .map(|s| RestrictionTerm::unconstrained(Root::Simple(s.clone()))),
    );
    Equation {
        lhs: Restriction::full(flavor),
        has_atom: true,
        terms,
        mode: Mode::Disjoint,
    }
}

/// The three closure equations; disjoint by uniqueness of decomposition.
pub fn closure_system(simples: &[Perm]) -> Result<System> {
    if let Some(s) = simples.iter().find(|s| !s.is_simple()) {
        return Err(Error::NotSimple(s.clone()));
    }
    let mut simples = simples.to_vec();
    simples.sort();
    simples.dedup();
    let equations = [Flavor::Any, Flavor::Plus, Flavor::Minus]
        .into_iter()
        .map(|f| (Restriction::full(f), closure_equation(f, &simples)))
        .collect();
    Ok(System {
        root: Restriction::full(Flavor::Any),
        equations,
        basis: Vec::new(),
        simples,
        mode: Mode::Disjoint,
    })
}

/// Rewrites `t<E>` (members of `t` avoiding every pattern of `E`) as a
/// union of terms whose components carry the constraints.
///
/// The smallest pattern `γ` of `E` is handled first. Avoiding `γ` means
/// that for every embedding of `γ` in the root, some component avoids the
/// block of `γ` assigned to it; each way of choosing one nonempty block per
/// embedding yields one term. Terms with a statically empty component and
/// terms included in another one are dropped, then the remaining patterns
/// are handled recursively.
pub fn add_constraints(t: &RestrictionTerm, avoid: &[Perm]) -> Vec<RestrictionTerm> {
    if t.is_empty() {
        return Vec::new();
    }
    let mut pending: Vec<Perm> = avoid.to_vec();
    pending.sort();
    pending.dedup();
    if pending.is_empty() {
        return vec![t.clone()];
    }
    let gamma = pending.remove(0);
    let root = t.root().perm();
    let mut states = vec![t.clone()];
    for e in embeddings(&gamma, &root) {
        let induced = e.induced(&gamma);
        let mut next = Vec::new();
        for s in &states {
            for (k, block) in induced.iter().enumerate() {
                if let GenArg::Perm(b) = block {
                    let r = s.args()[k].with_avoid(b.clone());
                    if !r.is_empty() {
                        next.push(s.with_arg(k, r));
                    }
                }
            }
        }
        states = prune_subsumed(next);
        if states.is_empty() {
            return Vec::new();
        }
    }
    let out: Vec<RestrictionTerm> = states.iter().flat_map(|s| add_constraints(s, &pending)).collect();
    prune_subsumed(out)
}

/// Equation of `C^ε<E>()` obtained by constraining every closure term.
pub fn compute_eqn(lhs: &Restriction, simples: &[Perm]) -> Equation {
    debug_assert!(lhs.contain().is_empty());
    if lhs.is_empty() {
        return Equation {
            lhs: lhs.clone(),
            has_atom: false,
            terms: Vec::new(),
            mode: Mode::Ambiguous,
        };
    }
    let base = closure_equation(lhs.flavor(), simples);
    let terms: Vec<RestrictionTerm> = base
        .terms
        .iter()
        .flat_map(|t| add_constraints(t, lhs.avoid()))
        .collect();
    let mut eq = Equation {
        lhs: lhs.clone(),
        has_atom: lhs.admits_atom(),
        terms: prune_subsumed(terms),
        mode: Mode::Ambiguous,
    };
    eq.canonicalize();
    eq
}

/// The ambiguous system of `Av(B)`, rooted at `C<B*>`.
pub fn ambiguous_system(input: &ClassInput) -> Result<System> {
    let root = Restriction::new(Flavor::Any, input.basis_star.iter().cloned(), []);
    let seeds =
        [Flavor::Any, Flavor::Plus, Flavor::Minus].map(|f| Restriction::new(f, input.basis_star.iter().cloned(), []));
    let equations = close_over(seeds, |r| Ok(compute_eqn(r, &input.simples)))?;
    Ok(System {
        root,
        equations,
        basis: input.basis.clone(),
        simples: input.simples.clone(),
        mode: Mode::Ambiguous,
    })
}

/// Worklist closure: computes an equation for every seed and for every
/// restriction reached from it, in canonical order.
pub(crate) fn close_over(
    seeds: impl IntoIterator<Item = Restriction>,
    mut equation_for: impl FnMut(&Restriction) -> Result<Equation>,
) -> Result<BTreeMap<Restriction, Equation>> {
    let mut equations = BTreeMap::new();
    let mut queued: BTreeSet<Restriction> = BTreeSet::new();
    let mut queue: VecDeque<Restriction> = VecDeque::new();
    for s in seeds {
        if queued.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(r) = queue.pop_front() {
        let eq = equation_for(&r)?;
        let mut fresh: BTreeSet<Restriction> = BTreeSet::new();
        for t in &eq.terms {
            for a in t.args() {
                if !queued.contains(a) {
                    fresh.insert(a.clone());
                }
            }
        }
        for a in fresh {
            queued.insert(a.clone());
            queue.push_back(a);
        }
        equations.insert(r, eq);
        if equations.len() > MAX_EQUATIONS {
            return Err(Error::IterationBound(MAX_EQUATIONS));
        }
    }
    Ok(equations)
}
