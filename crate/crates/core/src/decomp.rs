//! Substitution decomposition trees.
//!
//! Every permutation of size at least two is uniquely `12[a, b]` with `a`
//! not itself `12[..]`, `21[a, b]` with `a` not itself `21[..]`, or
//! `π[a_1, ..., a_k]` with `π` simple. Applying this recursively yields the
//! canonical tree.

use std::fmt;

use crate::perm::Perm;

/// Label of an internal node, also the root of a restriction term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    /// `12`
    Inc,
    /// `21`
    Dec,
    Simple(Perm),
}

impl Root {
    pub fn perm(&self) -> Perm {
        match self {
            Root::Inc => Perm::identity(2),
            Root::Dec => Perm::new(vec![2, 1]).unwrap(),
            Root::Simple(p) => p.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Root::Inc | Root::Dec => 2,
            Root::Simple(p) => p.len(),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Inc => f.write_str("12"),
            Root::Dec => f.write_str("21"),
            Root::Simple(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecompTree {
    Atom,
    Node { root: Root, children: Vec<DecompTree> },
}

impl DecompTree {
    pub fn root(&self) -> Option<&Root> {
        match self {
            DecompTree::Atom => None,
            DecompTree::Node { root, .. } => Some(root),
        }
    }

    pub fn children(&self) -> &[DecompTree] {
        match self {
            DecompTree::Atom => &[],
            DecompTree::Node { children, .. } => children,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            DecompTree::Atom => 1,
            DecompTree::Node { children, .. } => children.iter().map(DecompTree::size).sum(),
        }
    }

    /// The permutation this tree describes.
    pub fn rebuild(&self) -> Perm {
        match self {
            DecompTree::Atom => Perm::one(),
            DecompTree::Node { root, children } => {
                let args: Vec<Perm> = children.iter().map(DecompTree::rebuild).collect();
                root.perm().substitute(&args).expect("tree arity matches its root")
            }
        }
    }

    /// Labels of every simple node, in preorder.
    pub fn simple_labels(&self) -> Vec<&Perm> {
        let mut out = Vec::new();
        self.collect_simple(&mut out);
        out
    }

    fn collect_simple<'a>(&'a self, out: &mut Vec<&'a Perm>) {
        if let DecompTree::Node { root, children } = self {
            if let Root::Simple(p) = root {
                out.push(p);
            }
            for c in children {
                c.collect_simple(out);
            }
        }
    }

    /// Checks the structural invariants: arities, simplicity of simple
    /// labels, and that the first child of a `12` (`21`) node is not
    /// `12`- (`21`-) rooted.
    pub fn is_canonical(&self) -> bool {
        match self {
            DecompTree::Atom => true,
            DecompTree::Node { root, children } => {
                if children.len() != root.arity() {
                    return false;
                }
                let ok = match root {
                    Root::Inc => children[0].root() != Some(&Root::Inc),
                    Root::Dec => children[0].root() != Some(&Root::Dec),
                    Root::Simple(p) => p.is_simple(),
                };
                ok && children.iter().all(DecompTree::is_canonical)
            }
        }
    }
}

/// Bracket notation, e.g. `2413[12[1,1],1,1,1]`.
impl fmt::Display for DecompTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompTree::Atom => f.write_str("1"),
            DecompTree::Node { root, children } => {
                match root {
                    Root::Simple(p) => f.write_str(&p.compact())?,
                    other => write!(f, "{other}")?,
                }
                f.write_str("[")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// One level of decomposition: the root and the patterns of the blocks.
pub fn split(p: &Perm) -> Option<(Root, Vec<Perm>)> {
    let n = p.len();
    if n == 1 {
        return None;
    }
    if let Some(k) = p.sum_split() {
        return Some((Root::Inc, vec![p.factor(0, k), p.factor(k, n - k)]));
    }
    if let Some(k) = p.skew_split() {
        return Some((Root::Dec, vec![p.factor(0, k), p.factor(k, n - k)]));
    }
    // Neither 12- nor 21-decomposable: the maximal proper intervals
    // partition the positions, and the longest proper interval starting at
    // a block boundary is that block.
    let vals = p.values();
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < n {
        let (mut lo, mut hi) = (vals[start], vals[start]);
        let mut best = 1;
        for end in start + 1..n {
            if start == 0 && end == n - 1 {
                break;
            }
            lo = lo.min(vals[end]);
            hi = hi.max(vals[end]);
            if (hi - lo) as usize == end - start {
                best = end - start + 1;
            }
        }
        blocks.push((start, best));
        start += best;
    }
    let heads: Vec<u32> = blocks.iter().map(|&(s, _)| vals[s]).collect();
    let quotient = Perm::pattern_of(&heads);
    debug_assert!(quotient.is_simple(), "{p} has quotient {quotient}");
    let children = blocks.iter().map(|&(s, l)| p.factor(s, l)).collect();
    Some((Root::Simple(quotient), children))
}

pub fn decompose(p: &Perm) -> DecompTree {
    match split(p) {
        None => DecompTree::Atom,
        Some((root, parts)) => DecompTree::Node {
            root,
            children: parts.iter().map(decompose).collect(),
        },
    }
}
