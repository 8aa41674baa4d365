//! Generating functions, exact counting and productivity of a disjoint system.
//!
//! Every term has at least two components and every component is nonempty,
//! so a term of size `n` only involves components of size below `n`. The
//! coefficients are therefore computed size by size without any fixpoint:
//! at size `n`, the partial convolutions `Q_j(n)` (ways for the first `j`
//! components to have total size `n`, `j >= 2`) use smaller sizes only, and
//! `c_S(n)` is the atom plus the sum of the full convolutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::decomp::Root;
use crate::error::{Error, Result};
use crate::ir::{Mode, Restriction, System};

pub const DEFAULT_MAX_SIZE: usize = 40;
pub const GF_TOLERANCE: f64 = 1e-12;
pub const GF_MAX_ITERATIONS: usize = 100_000;

/// A term whose components are referred to by nonterminal index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTerm {
    pub root: Root,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledRule {
    pub has_atom: bool,
    pub terms: Vec<CompiledTerm>,
}

/// A closed disjoint system with nonterminals numbered in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub names: Vec<Restriction>,
    pub rules: Vec<CompiledRule>,
    pub root: usize,
}

impl Grammar {
    pub fn compile(sys: &System) -> Result<Grammar> {
        if sys.mode != Mode::Disjoint {
            return Err(Error::AmbiguousSystem);
        }
        let names: Vec<Restriction> = sys.equations.keys().cloned().collect();
        let index: BTreeMap<&Restriction, usize> = names.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let lookup = |r: &Restriction| index.get(r).copied().ok_or_else(|| Error::OpenSystem(r.to_string()));
        let rules = sys
            .equations
            .values()
            .map(|eq| {
                let terms = eq
                    .terms
                    .iter()
                    .map(|t| {
                        let args = t.args().iter().map(&lookup).collect::<Result<Vec<_>>>()?;
                        Ok(CompiledTerm {
                            root: t.root().clone(),
                            args,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CompiledRule {
                    has_atom: eq.has_atom,
                    terms,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let root = lookup(&sys.root)?;
        Ok(Grammar { names, rules, root })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, r: &Restriction) -> Option<usize> {
        self.names.binary_search(r).ok()
    }
}

/// The generating function system, one equation per nonterminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfSystem {
    grammar: Grammar,
}

impl GfSystem {
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    /// Right-hand side of the equation of nonterminal `i`.
    pub fn rhs(&self, i: usize) -> String {
        let rule = &self.grammar.rules[i];
        let mut parts = Vec::new();
        if rule.has_atom {
            parts.push("z".to_string());
        }
        for t in &rule.terms {
            let factors: Vec<String> = t.args.iter().map(|&a| self.symbol(a)).collect();
            parts.push(factors.join("*"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn symbol(&self, i: usize) -> String {
        format!("F{{{}}}(z)", self.grammar.names[i])
    }
}

impl fmt::Display for GfSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.grammar.len() {
            writeln!(f, "{} = {}", self.symbol(i), self.rhs(i))?;
        }
        Ok(())
    }
}

pub fn emit_gf_equations(sys: &System) -> Result<GfSystem> {
    Ok(GfSystem {
        grammar: Grammar::compile(sys)?,
    })
}

/// Exact coefficients of every nonterminal for sizes `1..=depth`, with the
/// partial convolutions of every term kept for the sampler.
#[derive(Clone, Debug)]
pub struct CountTable {
    grammar: Grammar,
    depth: usize,
    /// `counts[s][n]`, index 0 unused.
    counts: Vec<Vec<BigUint>>,
    /// `partial[s][t][j][n]`: ways for the first `j + 1` components of term
    /// `t` of nonterminal `s` to have total size `n`.
    partial: Vec<Vec<Vec<Vec<BigUint>>>>,
}

impl CountTable {
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `c_s(n)`; zero beyond the depth.
    pub fn count(&self, s: usize, n: usize) -> &BigUint {
        &self.counts[s][n]
    }

    pub fn root_counts(&self) -> Vec<BigUint> {
        self.counts[self.grammar.root][1..].to_vec()
    }

    pub fn counts_of(&self, s: usize) -> &[BigUint] {
        &self.counts[s][1..]
    }

    /// Number of members of term `t` of `s` of size `n` whose first `j + 1`
    /// components have total size `n`.
    pub fn partial(&self, s: usize, t: usize, j: usize, n: usize) -> &BigUint {
        &self.partial[s][t][j][n]
    }

    /// Members of size `n` contributed by term `t` of `s`.
    pub fn term_count(&self, s: usize, t: usize, n: usize) -> &BigUint {
        let j = self.grammar.rules[s].terms[t].args.len() - 1;
        &self.partial[s][t][j][n]
    }
}

pub fn count_coefficients(sys: &System, depth: usize) -> Result<CountTable> {
    Ok(count_grammar(Grammar::compile(sys)?, depth))
}

pub fn count_grammar(grammar: Grammar, depth: usize) -> CountTable {
    let k = grammar.len();
    let mut counts = vec![vec![BigUint::zero(); depth + 1]; k];
    let mut partial: Vec<Vec<Vec<Vec<BigUint>>>> = grammar
        .rules
        .iter()
        .map(|r| {
            r.terms
                .iter()
                .map(|t| vec![vec![BigUint::zero(); depth + 1]; t.args.len()])
                .collect()
        })
        .collect();
    for n in 1..=depth {
        // convolutions of at least two components: sizes below n only
        let level: Vec<Vec<Vec<BigUint>>> = (0..k)
            .into_par_iter()
            .map(|s| {
                grammar.rules[s]
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(ti, t)| {
                        let table = &partial[s][ti];
                        (1..t.args.len())
                            .map(|j| {
                                let comp = &counts[t.args[j]];
                                let mut acc = BigUint::zero();
                                for size in 1..n {
                                    let (a, b) = (&table[j - 1][n - size], &comp[size]);
                                    if !a.is_zero() && !b.is_zero() {
                                        acc += a * b;
                                    }
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // a later partial at level n depends on the earlier one at level n
        // only through smaller sizes, so filling them in order is sound
        for (s, terms) in level.into_iter().enumerate() {
            for (ti, values) in terms.into_iter().enumerate() {
                for (j, v) in values.into_iter().enumerate() {
                    partial[s][ti][j + 1][n] = v;
                }
            }
        }
        for s in 0..k {
            let rule = &grammar.rules[s];
            let mut c = BigUint::from(u8::from(rule.has_atom && n == 1));
            for (ti, t) in rule.terms.iter().enumerate() {
                c += &partial[s][ti][t.args.len() - 1][n];
            }
            counts[s][n] = c;
        }
        for (s, rule) in grammar.rules.iter().enumerate() {
            for (ti, t) in rule.terms.iter().enumerate() {
                partial[s][ti][0][n] = counts[t.args[0]][n].clone();
            }
        }
    }
    CountTable {
        grammar,
        depth,
        counts,
        partial,
    }
}

/// Nonterminals generating no permutation at all.
pub fn productivity_analysis(sys: &System) -> BTreeSet<Restriction> {
    let productive = productive_set(sys);
    sys.equations
        .keys()
        .filter(|r| !productive.contains(*r))
        .cloned()
        .collect()
}

fn productive_set(sys: &System) -> BTreeSet<Restriction> {
    let mut productive: BTreeSet<Restriction> = BTreeSet::new();
    loop {
        let mut changed = false;
        for (lhs, eq) in &sys.equations {
            if productive.contains(lhs) {
                continue;
            }
            let ok = eq.has_atom || eq.terms.iter().any(|t| t.args().iter().all(|a| productive.contains(a)));
            if ok {
                productive.insert(lhs.clone());
                changed = true;
            }
        }
        if !changed {
            return productive;
        }
    }
}

/// Drops unproductive nonterminals and every term mentioning one, then
/// every equation no longer reachable from the root. The root is kept
/// even when it is unproductive.
pub fn prune_unproductive(sys: &System) -> System {
    let productive = productive_set(sys);
    let mut equations: BTreeMap<Restriction, _> = sys
        .equations
        .iter()
        .filter(|(lhs, _)| productive.contains(*lhs) || **lhs == sys.root)
        .map(|(lhs, eq)| {
            let mut eq = eq.clone();
            eq.terms.retain(|t| t.args().iter().all(|a| productive.contains(a)));
            (lhs.clone(), eq)
        })
        .collect();
    let mut reachable = BTreeSet::new();
    let mut stack = vec![sys.root.clone()];
    while let Some(r) = stack.pop() {
        if !reachable.insert(r.clone()) {
            continue;
        }
        if let Some(eq) = equations.get(&r) {
            for t in &eq.terms {
                stack.extend(t.args().iter().filter(|a| !reachable.contains(*a)).cloned());
            }
        }
    }
    equations.retain(|lhs, _| reachable.contains(lhs));
    System {
        equations,
        ..sys.clone()
    }
}

/// Values `F_s(z)` of every nonterminal, by monotone iteration from zero.
pub fn evaluate_gf(grammar: &Grammar, z: f64) -> Result<Vec<f64>> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidInput(format!("z = {z} must be positive and finite")));
    }
    let mut values = vec![0.0f64; grammar.len()];
    for _ in 0..GF_MAX_ITERATIONS {
        let next: Vec<f64> = grammar
            .rules
            .iter()
            .map(|rule| {
                let atom = if rule.has_atom { z } else { 0.0 };
                atom + rule
                    .terms
                    .iter()
                    .map(|t| t.args.iter().map(|&a| values[a]).product::<f64>())
                    .sum::<f64>()
            })
            .collect();
        if next.iter().any(|v| !v.is_finite() || *v > 1e300) {
            return Err(Error::Divergent(z));
        }
        let converged = next
            .iter()
            .zip(&values)
            .all(|(a, b)| (a - b).abs() <= GF_TOLERANCE * a.abs().max(f64::MIN_POSITIVE));
        values = next;
        if converged {
            return Ok(values);
        }
    }
    Err(Error::Divergent(z))
}

pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
