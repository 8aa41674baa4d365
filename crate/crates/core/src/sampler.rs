//! Uniform random permutations from a counted specification.
//!
//! Exact-size sampling uses the recursive method: at size `n` the atom or a
//! term is chosen with probability proportional to its count, then the
//! component sizes are drawn from the last component backwards using the
//! partial convolution tables, and the components are sampled recursively.
//!
//! Boltzmann sampling evaluates the generating functions numerically at `z`
//! and draws every choice with probability proportional to its weight;
//! outputs outside the size window are rejected.

use std::ops::RangeInclusive;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{evaluate_gf, CountTable};
use crate::error::{Error, Result};
use crate::perm::Perm;

pub const DEFAULT_REJECTION_BUDGET: usize = 1_000_000;

/// A seeded random source bound to a count table and a target nonterminal.
/// The stream of outputs is determined by the seed.
pub struct SamplerState<'a> {
    table: &'a CountTable,
    target: usize,
    rng: ChaCha8Rng,
    gf_cache: Option<(f64, Vec<f64>)>,
}

impl<'a> SamplerState<'a> {
    /// Samples the root of the table's grammar.
    pub fn new(table: &'a CountTable, seed: u64) -> SamplerState<'a> {
        SamplerState {
            table,
            target: table.grammar().root,
            rng: ChaCha8Rng::seed_from_u64(seed),
            gf_cache: None,
        }
    }

    pub fn with_target(mut self, target: usize) -> SamplerState<'a> {
        assert!(target < self.table.grammar().len());
        self.target = target;
        self
    }

    /// A uniform member of size `n` of the target.
    pub fn sample_exact(&mut self, n: usize) -> Result<Perm> {
        if n > self.table.depth() {
            return Err(Error::DepthExceeded {
                n,
                depth: self.table.depth(),
            });
        }
        if n == 0 || self.table.count(self.target, n).is_zero() {
            return Err(Error::EmptySizeClass(n));
        }
        Ok(self.exact(self.target, n))
    }

    fn below(&mut self, bound: &BigUint) -> BigUint {
        self.rng.gen_biguint_below(bound)
    }

    fn exact(&mut self, s: usize, n: usize) -> Perm {
        let table = self.table;
        let rule = &table.grammar().rules[s];
        let mut r = self.below(table.count(s, n));
        if rule.has_atom && n == 1 {
            if r.is_zero() {
                return Perm::one();
            }
            r -= 1u32;
        }
        let mut chosen = None;
        for (ti, _) in rule.terms.iter().enumerate() {
            let c = table.term_count(s, ti, n);
            if r < *c {
                chosen = Some(ti);
                break;
            }
            r -= c;
        }
        let ti = chosen.expect("counts are consistent");
        let term = &rule.terms[ti];
        let m = term.args.len();
        let mut sizes = vec![0; m];
        let mut rem = n;
        for j in (1..m).rev() {
            let mut r = self.below(table.partial(s, ti, j, rem));
            let mut pick = None;
            for size in 1..rem {
                let w = table.partial(s, ti, j - 1, rem - size) * table.count(term.args[j], size);
                if r < w {
                    pick = Some(size);
                    break;
                }
                r -= w;
            }
            let size = pick.expect("partial counts are consistent");
            sizes[j] = size;
            rem -= size;
        }
        sizes[0] = rem;
        let children: Vec<Perm> = term.args.iter().zip(&sizes).map(|(&a, &k)| self.exact(a, k)).collect();
        term.root
            .perm()
            .substitute(&children)
            .expect("arity checked at compile time")
    }

    /// A Boltzmann draw at `z` conditioned on its size lying in `window`.
    pub fn sample_boltzmann(&mut self, z: f64, window: RangeInclusive<usize>, budget: usize) -> Result<Perm> {
        if window.is_empty() || *window.end() == 0 {
            return Err(Error::InvalidInput("empty size window".into()));
        }
        let values = match &self.gf_cache {
            Some((cz, v)) if *cz == z => v.clone(),
            _ => {
                let v = evaluate_gf(self.table.grammar(), z)?;
                self.gf_cache = Some((z, v.clone()));
                v
            }
        };
        if values[self.target] <= 0.0 {
            return Err(Error::EmptySizeClass(*window.start()));
        }
        for _ in 0..budget {
            let mut room = *window.end();
            if let Some(p) = self.boltzmann(self.target, z, &values, &mut room) {
                if window.contains(&p.len()) {
                    return Ok(p);
                }
            }
        }
        Err(Error::RejectionBudget(budget))
    }

    /// One free Boltzmann draw, abandoned once more than `room` atoms have
    /// been produced.
    fn boltzmann(&mut self, s: usize, z: f64, values: &[f64], room: &mut usize) -> Option<Perm> {
        let rule = &self.table.grammar().rules[s];
        let mut r = self.rng.gen::<f64>() * values[s];
        if rule.has_atom {
            if r < z {
                if *room == 0 {
                    return None;
                }
                *room -= 1;
                return Some(Perm::one());
            }
            r -= z;
        }
        let weights: Vec<f64> = rule
            .terms
            .iter()
            .map(|t| t.args.iter().map(|&a| values[a]).product())
            .collect();
        // rounding may leave r just above the last weight
        let last = weights.iter().rposition(|w| *w > 0.0)?;
        let mut ti = last;
        for (i, w) in weights.iter().enumerate() {
            if r < *w {
                ti = i;
                break;
            }
            r -= w;
        }
        let term = &rule.terms[ti];
        let mut children = Vec::with_capacity(term.args.len());
        for &a in &term.args {
            children.push(self.boltzmann(a, z, values, room)?);
        }
        Some(
            term.root
                .perm()
                .substitute(&children)
                .expect("arity checked at compile time"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{ambiguous_system, ClassInput};
    use crate::disambiguate::disambiguate_system;
    use crate::engine::count_coefficients;
    use crate::oracle::enumerate_avoiders;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::BTreeMap;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn table(basis: &[&str], simples: &[&str], depth: usize) -> CountTable {
        let input = ClassInput::new(
            basis.iter().map(|s| p(s)).collect(),
            simples.iter().map(|s| p(s)).collect(),
        )
        .unwrap();
        let spec = disambiguate_system(&ambiguous_system(&input).unwrap()).unwrap();
        count_coefficients(&spec, depth).unwrap()
    }

    /// Chi-square statistic of the observed frequencies against uniform over
    /// `members`, with the 0.001 critical value.
    fn chi_square(samples: &[Perm], members: &[Perm]) -> (f64, f64) {
        let mut freq: BTreeMap<&Perm, usize> = members.iter().map(|m| (m, 0)).collect();
        for s in samples {
            *freq.get_mut(s).expect("sample is a member") += 1;
        }
        let expected = samples.len() as f64 / members.len() as f64;
        let stat = freq.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        let crit = ChiSquared::new((members.len() - 1) as f64).unwrap().inverse_cdf(0.999);
        (stat, crit)
    }

    #[test]
    fn size_one_is_the_atom() {
        let t = table(&["132"], &[], 4);
        let mut s = SamplerState::new(&t, 7);
        for _ in 0..10 {
            assert_eq!(s.sample_exact(1).unwrap(), Perm::one());
        }
    }

    #[test]
    fn exact_sampling_is_uniform_on_av132() {
        let t = table(&["132"], &[], 6);
        let members = enumerate_avoiders(&[p("132")], 6).unwrap();
        let mut s = SamplerState::new(&t, 2024);
        let samples: Vec<Perm> = (0..100 * members.len()).map(|_| s.sample_exact(6).unwrap()).collect();
        let (stat, crit) = chi_square(&samples, &members);
        assert!(stat < crit, "{stat} >= {crit}");
        let seen: std::collections::BTreeSet<&Perm> = samples.iter().collect();
        assert_eq!(seen.len(), members.len());
    }

    #[test]
    fn exact_samples_avoid_the_basis() {
        let b = ["1243", "2413", "531642", "41352"];
        let t = table(&b, &["3142"], 9);
        let basis = b.map(p);
        let mut s = SamplerState::new(&t, 1);
        for _ in 0..300 {
            let q = s.sample_exact(9).unwrap();
            assert_eq!(q.len(), 9);
            assert!(q.avoids_all(&basis), "{q}");
        }
    }

    #[test]
    fn seeds_determine_the_stream() {
        let t = table(&["132"], &[], 10);
        let draw = |seed| {
            let mut s = SamplerState::new(&t, seed);
            (0..20).map(|_| s.sample_exact(10).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn sampling_errors() {
        let t = table(&["12"], &[], 5);
        let mut s = SamplerState::new(&t, 0);
        assert_eq!(s.sample_exact(6), Err(Error::DepthExceeded { n: 6, depth: 5 }));
        assert_eq!(s.sample_exact(3).unwrap(), p("321"));
        assert_eq!(s.sample_exact(0), Err(Error::EmptySizeClass(0)));
    }

    #[test]
    fn boltzmann_conditioned_on_size_is_uniform() {
        let t = table(&["132"], &[], 5);
        let members = enumerate_avoiders(&[p("132")], 5).unwrap();
        let mut s = SamplerState::new(&t, 99);
        let samples: Vec<Perm> = (0..100 * members.len())
            .map(|_| s.sample_boltzmann(0.24, 5..=5, DEFAULT_REJECTION_BUDGET).unwrap())
            .collect();
        let (stat, crit) = chi_square(&samples, &members);
        assert!(stat < crit, "{stat} >= {crit}");
    }

    #[test]
    fn boltzmann_draws_are_members() {
        let b = ["1243", "2413", "531642", "41352"];
        let t = table(&b, &["3142"], 1);
        let basis = b.map(p);
        let mut s = SamplerState::new(&t, 3);
        for _ in 0..200 {
            let q = s.sample_boltzmann(0.2, 1..=30, DEFAULT_REJECTION_BUDGET).unwrap();
            assert!(q.avoids_all(&basis), "{q}");
        }
    }

    #[test]
    fn boltzmann_near_zero_gives_the_atom() {
        let t = table(&["132"], &[], 1);
        let mut s = SamplerState::new(&t, 3);
        assert_eq!(s.sample_boltzmann(1e-9, 1..=10, 10).unwrap(), Perm::one());
        assert!(matches!(s.sample_boltzmann(0.3, 1..=10, 10), Err(Error::Divergent(_))));
        assert_eq!(s.sample_boltzmann(1e-9, 5..=5, 10), Err(Error::RejectionBudget(10)));
    }
}
