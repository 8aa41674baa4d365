//! Restrictions, restriction terms, equations and systems, with the set
//! algebra (normalization, intersection, complement) the builder and the
//! disambiguator rely on.
//!
//! A restriction `C^ε<E>(A)` is the set of permutations of the substitution
//! closure with flavor `ε` that avoid every pattern of `E` and contain every
//! pattern of `A`. The closure itself is implicit: it is fixed by the set of
//! simple permutations carried by the enclosing [`System`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::decomp::{split, Root};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Which part of the closure a restriction lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// The whole closure.
    Any,
    /// Its `12`-indecomposable members.
    Plus,
    /// Its `21`-indecomposable members.
    Minus,
}

impl Flavor {
    pub fn symbol(self) -> &'static str {
        match self {
            Flavor::Any => "C",
            Flavor::Plus => "C+",
            Flavor::Minus => "C-",
        }
    }

    pub fn admits(self, p: &Perm) -> bool {
        match self {
            Flavor::Any => true,
            Flavor::Plus => p.sum_split().is_none(),
            Flavor::Minus => p.skew_split().is_none(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Restriction {
    flavor: Flavor,
    avoid: Vec<Perm>,
    contain: Vec<Perm>,
    empty: bool,
}

impl Restriction {
    /// Builds the normalized restriction. `avoid` is reduced to its minimal
    /// elements and `contain` to its maximal ones (patterns of size one are
    /// always contained and are dropped).
    pub fn new(
        flavor: Flavor,
        avoid: impl IntoIterator<Item = Perm>,
        contain: impl IntoIterator<Item = Perm>,
    ) -> Restriction {
        let avoid = minimal_elements(avoid.into_iter().collect());
        let contain = maximal_elements(contain.into_iter().filter(|p| p.len() > 1).collect());
        let empty = avoid.iter().any(|e| e.len() == 1) || contain.iter().any(|a| avoid.iter().any(|e| a.contains(e)));
        Restriction {
            flavor,
            avoid,
            contain,
            empty,
        }
    }

    /// `C^ε<>()`, the whole flavor.
    pub fn full(flavor: Flavor) -> Restriction {
        Restriction {
            flavor,
            avoid: Vec::new(),
            contain: Vec::new(),
            empty: false,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn avoid(&self) -> &[Perm] {
        &self.avoid
    }

    pub fn contain(&self) -> &[Perm] {
        &self.contain
    }

    /// Statically known to be empty. Sound but not complete.
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_full(&self) -> bool {
        self.avoid.is_empty() && self.contain.is_empty()
    }

    /// Whether the permutation `1` belongs to this restriction.
    pub fn admits_atom(&self) -> bool {
        !self.empty && self.contain.is_empty() && self.avoid.iter().all(|e| e.len() > 1)
    }

    pub fn normalize(&self) -> Restriction {
        Restriction::new(self.flavor, self.avoid.clone(), self.contain.clone())
    }

    pub fn with_avoid(&self, p: Perm) -> Restriction {
        let mut avoid = self.avoid.clone();
        avoid.push(p);
        Restriction::new(self.flavor, avoid, self.contain.clone())
    }

    pub fn with_contain(&self, p: Perm) -> Restriction {
        let mut contain = self.contain.clone();
        contain.push(p);
        Restriction::new(self.flavor, self.avoid.clone(), contain)
    }

    pub fn intersect(&self, other: &Restriction) -> Result<Restriction> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        Ok(Restriction::new(
            self.flavor,
            self.avoid.iter().chain(&other.avoid).cloned(),
            self.contain.iter().chain(&other.contain).cloned(),
        ))
    }

    /// `C^ε \ self` as a disjoint family: for every `X ⊆ A`, `Y ⊆ E`, not
    /// both empty, the members avoiding `X ∪ (E\Y)` and containing
    /// `Y ∪ (A\X)`. Statically empty members are dropped.
    pub fn complement(&self) -> Vec<Restriction> {
        if self.empty {
            return vec![Restriction::full(self.flavor)];
        }
        let a = &self.contain;
        let e = &self.avoid;
        let mut out = Vec::new();
        for xs in 0u64..1 << a.len() {
            for ys in 0u64..1 << e.len() {
                if xs == 0 && ys == 0 {
                    continue;
                }
                let mut avoid = Vec::new();
                let mut contain = Vec::new();
                for (i, p) in a.iter().enumerate() {
                    if xs >> i & 1 == 1 {
                        avoid.push(p.clone())
                    } else {
                        contain.push(p.clone())
                    }
                }
                for (i, p) in e.iter().enumerate() {
                    if ys >> i & 1 == 1 {
                        contain.push(p.clone())
                    } else {
                        avoid.push(p.clone())
                    }
                }
                let r = Restriction::new(self.flavor, avoid, contain);
                if !r.is_empty() {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Syntactic inclusion: every avoided pattern of `other` is implied by
    /// one of ours and every contained pattern of `other` by one of ours.
    pub fn is_subset_of(&self, other: &Restriction) -> bool {
        if self.flavor != other.flavor {
            return false;
        }
        if self.empty {
            return true;
        }
        other.avoid.iter().all(|e2| self.avoid.iter().any(|e| e2.contains(e)))
            && other
                .contain
                .iter()
                .all(|a2| self.contain.iter().any(|a| a.contains(a2)))
    }

    /// Membership of `p`, given the set of simple permutations of the closure.
    pub fn admits(&self, p: &Perm, closure: &Closure) -> bool {
        !self.empty
            && self.flavor.admits(p)
            && self.avoid.iter().all(|e| !p.contains(e))
            && self.contain.iter().all(|a| p.contains(a))
            && closure.contains(p)
    }

    /// Patterns mentioned in the constraints.
    pub fn patterns(&self) -> impl Iterator<Item = &Perm> {
        self.avoid.iter().chain(&self.contain)
    }
}

fn minimal_elements(mut v: Vec<Perm>) -> Vec<Perm> {
    v.sort();
    v.dedup();
    let keep: Vec<bool> = v
        .iter()
        .enumerate()
        .map(|(i, p)| !v[..i].iter().any(|q| p.contains(q)))
        .collect();
    v.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

fn maximal_elements(mut v: Vec<Perm>) -> Vec<Perm> {
    v.sort();
    v.dedup();
    let keep: Vec<bool> = v
        .iter()
        .enumerate()
        .map(|(i, p)| !v[i + 1..].iter().any(|q| q.contains(p)))
        .collect();
    v.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

fn write_list(f: &mut fmt::Formatter<'_>, v: &[Perm]) -> fmt::Result {
    for (i, p) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

/// Canonical name, e.g. `C+<1 2;2 1>(1 3 2)`.
impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flavor.symbol())?;
        f.write_str("<")?;
        write_list(f, &self.avoid)?;
        f.write_str(">(")?;
        write_list(f, &self.contain)?;
        f.write_str(")")
    }
}

impl fmt::Debug for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `root[args...]`, the set of permutations whose decomposition has this
/// root and whose blocks lie in the respective restrictions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RestrictionTerm {
    root: Root,
    args: Vec<Restriction>,
}

impl RestrictionTerm {
    pub fn new(root: Root, args: Vec<Restriction>) -> Result<RestrictionTerm> {
        if args.len() != root.arity() {
            return Err(Error::ArityMismatch {
                expected: root.arity(),
                found: args.len(),
            });
        }
        if let Root::Simple(p) = &root {
            if !p.is_simple() {
                return Err(Error::NotSimple(p.clone()));
            }
        }
        for (i, a) in args.iter().enumerate() {
            if a.flavor() != Self::slot_flavor(&root, i) {
                return Err(Error::MalformedTerm(format!(
                    "argument {} of a {root}-rooted term must have flavor {}",
                    i + 1,
                    Self::slot_flavor(&root, i).symbol()
                )));
            }
        }
        Ok(RestrictionTerm { root, args })
    }

    /// Flavor required at position `i` under `root`: the first block of a
    /// `12` (`21`) node is `12`- (`21`-) indecomposable.
    pub fn slot_flavor(root: &Root, i: usize) -> Flavor {
        match (root, i) {
            (Root::Inc, 0) => Flavor::Plus,
            (Root::Dec, 0) => Flavor::Minus,
            _ => Flavor::Any,
        }
    }

    /// `root[C^ε, ..., C^ε]` with no constraints.
    pub fn unconstrained(root: Root) -> RestrictionTerm {
        let args = (0..root.arity())
            .map(|i| Restriction::full(Self::slot_flavor(&root, i)))
            .collect();
        RestrictionTerm { root, args }
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    pub fn args(&self) -> &[Restriction] {
        &self.args
    }

    pub fn is_empty(&self) -> bool {
        self.args.iter().any(Restriction::is_empty)
    }

    /// Replaces one argument; flavor is preserved by construction.
    pub(crate) fn with_arg(&self, i: usize, r: Restriction) -> RestrictionTerm {
        debug_assert_eq!(r.flavor(), self.args[i].flavor());
        let mut args = self.args.clone();
        args[i] = r;
        RestrictionTerm {
            root: self.root.clone(),
            args,
        }
    }

    /// Componentwise intersection; `None` when roots differ or a component
    /// is statically empty.
    pub fn intersect(&self, other: &RestrictionTerm) -> Option<RestrictionTerm> {
        if self.root != other.root {
            return None;
        }
        let mut args = Vec::with_capacity(self.args.len());
        for (a, b) in self.args.iter().zip(&other.args) {
            let r = a.intersect(b).expect("same root implies same slot flavors");
            if r.is_empty() {
                return None;
            }
            args.push(r);
        }
        Some(RestrictionTerm {
            root: self.root.clone(),
            args,
        })
    }

    /// Members of the closure with this root that are not in `self`, as a
    /// disjoint family of terms.
    pub fn complement(&self) -> Vec<RestrictionTerm> {
        let parts: Vec<Vec<Restriction>> = self.args.iter().map(Restriction::complement).collect();
        let n = self.args.len();
        let mut out = Vec::new();
        for mask in 1u64..1 << n {
            // cartesian expansion over complemented positions
            let mut partial: Vec<Vec<Restriction>> = vec![Vec::with_capacity(n)];
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    let mut next = Vec::with_capacity(partial.len() * parts[i].len());
                    for prefix in &partial {
                        for c in &parts[i] {
                            let mut v = prefix.clone();
                            v.push(c.clone());
                            next.push(v);
                        }
                    }
                    partial = next;
                } else {
                    for prefix in &mut partial {
                        prefix.push(self.args[i].clone());
                    }
                }
                if partial.is_empty() {
                    break;
                }
            }
            out.extend(partial.into_iter().map(|args| RestrictionTerm {
                root: self.root.clone(),
                args,
            }));
        }
        out
    }

    pub fn is_subset_of(&self, other: &RestrictionTerm) -> bool {
        self.root == other.root && self.args.iter().zip(&other.args).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn admits(&self, p: &Perm, closure: &Closure) -> bool {
        match split(p) {
            Some((root, blocks)) if root == self.root => {
                self.args.iter().zip(&blocks).all(|(r, b)| r.admits(b, closure))
            }
            _ => false,
        }
    }
}

impl fmt::Display for RestrictionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.root)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for RestrictionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Removes duplicates and every term syntactically included in another term
/// of the same union. Only valid for unions, not for disjoint sums.
pub fn prune_subsumed(terms: Vec<RestrictionTerm>) -> Vec<RestrictionTerm> {
    let mut terms: Vec<RestrictionTerm> = terms.into_iter().filter(|t| !t.is_empty()).collect();
    terms.sort();
    terms.dedup();
    let keep: Vec<bool> = (0..terms.len())
        .map(|i| {
            !(0..terms.len())
                .any(|j| j != i && terms[i].is_subset_of(&terms[j]) && (j < i || !terms[j].is_subset_of(&terms[i])))
        })
        .collect();
    terms
        .into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Ambiguous,
    Disjoint,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ambiguous => "ambiguous",
            Mode::Disjoint => "disjoint",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Restriction,
    pub has_atom: bool,
    pub terms: Vec<RestrictionTerm>,
    pub mode: Mode,
}

impl Equation {
    /// Sorts summands canonically and removes exact duplicates.
    pub fn canonicalize(&mut self) {
        self.terms.sort();
        self.terms.dedup();
    }

    pub fn admits_rhs(&self, p: &Perm, closure: &Closure) -> usize {
        let atom = usize::from(self.has_atom && p.len() == 1);
        atom + self.terms.iter().filter(|t| t.admits(p, closure)).count()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.lhs)?;
        let mut first = true;
        if self.has_atom {
            f.write_str("1")?;
            first = false;
        }
        for t in &self.terms {
            if !first {
                f.write_str(" | ")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub root: Restriction,
    pub equations: BTreeMap<Restriction, Equation>,
    pub basis: Vec<Perm>,
    pub simples: Vec<Perm>,
    pub mode: Mode,
}

impl System {
    /// Restrictions used on some right-hand side but never defined.
    pub fn right_only(&self) -> BTreeSet<Restriction> {
        let mut out = BTreeSet::new();
        if !self.equations.contains_key(&self.root) {
            out.insert(self.root.clone());
        }
        for eq in self.equations.values() {
            for t in &eq.terms {
                for a in t.args() {
                    if !self.equations.contains_key(a) {
                        out.insert(a.clone());
                    }
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.right_only().is_empty()
    }

    pub fn closure(&self) -> Closure {
        Closure::new(self.simples.iter().cloned())
    }

    pub fn term_count(&self) -> usize {
        self.equations.values().map(|e| e.terms.len()).sum()
    }
}

/// The substitution closure: permutations whose decomposition trees only
/// use `12`, `21` and the given simple permutations.
#[derive(Clone, Debug, Default)]
pub struct Closure {
    simples: BTreeSet<Perm>,
}

impl Closure {
    pub fn new(simples: impl IntoIterator<Item = Perm>) -> Closure {
        Closure {
            simples: simples.into_iter().collect(),
        }
    }

    pub fn simples(&self) -> impl Iterator<Item = &Perm> {
        self.simples.iter()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        match split(p) {
            None => true,
            Some((root, blocks)) => {
                if let Root::Simple(s) = &root {
                    if !self.simples.contains(s) {
                        return false;
                    }
                }
                blocks.iter().all(|b| self.contains(b))
            }
        }
    }
}
