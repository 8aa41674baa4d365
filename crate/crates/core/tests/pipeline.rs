use std::collections::{BTreeMap, BTreeSet};

use permspec_core::builder::{ambiguous_system, ClassInput};
use permspec_core::disambiguate::disambiguate_system;
use permspec_core::engine::{count_coefficients, prune_unproductive};
use permspec_core::oracle::{avoider_counts, enumerate_avoiders};
use permspec_core::perm::all_perms;
use permspec_core::sampler::SamplerState;
use permspec_core::simples::compute_simples;
use permspec_core::verify::{check_counts, Universe};
use permspec_core::{Perm, System};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn perms(v: &[&str]) -> Vec<Perm> {
    v.iter().map(|s| s.parse().unwrap()).collect()
}

/// Bases whose classes have finitely many simple permutations.
fn bases() -> Vec<Vec<Perm>> {
    vec![
        perms(&["132"]),
        perms(&["231"]),
        perms(&["2413", "3142"]),
        perms(&["1243", "2413", "531642", "41352"]),
        perms(&["4231", "2413", "3142"]),
        perms(&["1234", "2413", "4321"]),
    ]
}

fn spec_of(basis: &[Perm]) -> (ClassInput, System) {
    let found = compute_simples(basis, 12);
    let input = ClassInput::from_search(basis.to_vec(), &found).unwrap();
    let amb = ambiguous_system(&input).unwrap();
    let spec = prune_unproductive(&disambiguate_system(&amb).unwrap());
    (input, spec)
}

/// All patterns of the given permutations.
fn pattern_closure(basis: &[Perm]) -> BTreeSet<Perm> {
    let max = basis.iter().map(Perm::len).max().unwrap_or(0);
    (1..=max)
        .flat_map(all_perms)
        .filter(|q| basis.iter().any(|b| b.contains(q)))
        .collect()
}

#[test]
fn counts_match_brute_force_up_to_eight() {
    for basis in bases() {
        let (_, spec) = spec_of(&basis);
        let table = count_coefficients(&spec, 8).unwrap();
        let got: Vec<String> = table.root_counts().iter().map(ToString::to_string).collect();
        let want: Vec<String> = avoider_counts(&basis, 8)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, want, "{basis:?}");
    }
}

#[test]
fn every_nonterminal_counts_its_own_members() {
    for basis in bases() {
        let (input, spec) = spec_of(&basis);
        let u = Universe::new(6, input.simples());
        let r = check_counts(&spec, &u).unwrap();
        assert!(r.passed(), "{basis:?}: {r}");
    }
}

#[test]
fn constraints_stay_within_the_patterns_of_the_basis() {
    for basis in bases() {
        let (input, spec) = spec_of(&basis);
        let allowed = pattern_closure(input.basis());
        let star = pattern_closure(input.basis_star());
        let amb = ambiguous_system(&input).unwrap();
        for r in amb.equations.keys() {
            assert!(r.contain().is_empty());
            assert!(r.avoid().iter().all(|e| star.contains(e)), "{r}");
        }
        for eq in spec.equations.values() {
            for t in &eq.terms {
                for r in t.args() {
                    assert!(r.patterns().all(|q| allowed.contains(q)), "{r}");
                }
            }
        }
    }
}

#[test]
fn exact_samples_are_uniform_for_small_sizes() {
    for basis in bases() {
        let (_, spec) = spec_of(&basis);
        let table = count_coefficients(&spec, 6).unwrap();
        for n in 3..=6 {
            let members = enumerate_avoiders(&basis, n).unwrap();
            let mut freq: BTreeMap<Perm, usize> = members.iter().map(|m| (m.clone(), 0)).collect();
            let mut state = SamplerState::new(&table, 1000 + n as u64);
            let draws = 100 * members.len();
            for _ in 0..draws {
                let q = state.sample_exact(n).unwrap();
                *freq.get_mut(&q).unwrap_or_else(|| panic!("{q} not in Av({basis:?})")) += 1;
            }
            assert!(freq.values().all(|&c| c > 0), "{basis:?} at {n}");
            let expected = draws as f64 / members.len() as f64;
            let stat: f64 = freq.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
            let crit = ChiSquared::new((members.len() - 1) as f64).unwrap().inverse_cdf(0.999);
            assert!(stat < crit, "{basis:?} at {n}: {stat} >= {crit}");
        }
    }
}

#[test]
fn construction_is_deterministic() {
    let basis = perms(&["1243", "2413", "531642", "41352"]);
    assert_eq!(spec_of(&basis).1, spec_of(&basis).1);
}
