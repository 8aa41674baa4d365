//! Embeddings of a pattern into the root of a substitution.
//!
//! An embedding of `γ` in `π` cuts `γ` left to right into `|π|` consecutive,
//! possibly empty factors and assigns factor `i` to position `i` of `π`, such
//! that the generalized substitution of the factors' patterns into `π`
//! gives back `γ`.

use crate::perm::{GenArg, Interval, Perm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    blocks: Vec<Interval>,
}

impl Embedding {
    /// Builds an embedding from block lengths; starts follow from the
    /// factorization. Does not check validity.
    pub fn from_lengths(lengths: &[usize]) -> Embedding {
        let mut start = 1;
        let blocks = lengths
            .iter()
            .map(|&len| {
                let b = Interval { start, len };
                start += len;
                b
            })
            .collect();
        Embedding { blocks }
    }

    pub fn blocks(&self) -> &[Interval] {
        &self.blocks
    }

    /// End position of every block; the canonical sort key.
    pub fn boundaries(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.start + b.len - 1).collect()
    }

    /// Patterns `γ_{α(1)}, ..., γ_{α(n)}` induced on each block.
    pub fn induced(&self, gamma: &Perm) -> Vec<GenArg> {
        self.blocks
            .iter()
            .map(|b| {
                if b.len == 0 {
                    GenArg::Empty
                } else {
                    GenArg::Perm(gamma.factor(b.start - 1, b.len))
                }
            })
            .collect()
    }

    /// Checks the defining identity `π{γ_{α(1)}, ..., γ_{α(n)}} = γ`.
    pub fn realizes(&self, gamma: &Perm, pi: &Perm) -> bool {
        if self.blocks.len() != pi.len() {
            return false;
        }
        // each nonempty block must carry consecutive values
        if !self.blocks.iter().all(|b| b.is_interval_of(gamma)) {
            return false;
        }
        match pi.gen_substitute(&self.induced(gamma)) {
            Ok(GenArg::Perm(q)) => q == *gamma,
            _ => false,
        }
    }
}

/// All embeddings of `gamma` in `pi`, sorted by boundary vector.
pub fn embeddings(gamma: &Perm, pi: &Perm) -> Vec<Embedding> {
    let mut out = Vec::new();
    let mut lengths = vec![0; pi.len()];
    compositions(gamma.len(), 0, &mut lengths, &mut |lens| {
        let e = Embedding::from_lengths(lens);
        if e.realizes(gamma, pi) {
            out.push(e);
        }
    });
    out.sort_by_key(Embedding::boundaries);
    out
}

/// Visits every weak composition of `total` into `lengths.len()` parts.
fn compositions(total: usize, at: usize, lengths: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    if at + 1 == lengths.len() {
        lengths[at] = total;
        visit(lengths);
        return;
    }
    for len in 0..=total {
        lengths[at] = len;
        compositions(total - len, at + 1, lengths, visit);
    }
}
