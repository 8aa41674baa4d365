//! Permutations in one-line notation and the pattern order on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of `1..=n`, `n >= 1`, stored in one-line notation.
///
/// Permutations are ordered by size first and lexicographically within a
/// size, which is the canonical order used for every sorted collection in
/// this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn new(values: Vec<u32>) -> Result<Perm> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidPerm("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::InvalidPerm(format!("{values:?} is not a bijection of 1..={n}")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm(values))
    }

    pub fn identity(n: usize) -> Perm {
        assert!(n >= 1);
        Perm((1..=n as u32).collect())
    }

    /// The single-element permutation `1`.
    pub fn one() -> Perm {
        Perm(vec![1])
    }

    /// Standardizes a sequence of distinct values to the permutation it is
    /// order-isomorphic to.
    pub fn pattern_of(seq: &[u32]) -> Perm {
        assert!(!seq.is_empty());
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_by_key(|&i| seq[i]);
        let mut values = vec![0; seq.len()];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Perm(values)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// Pattern formed by the positions `start..start+len` (0-based).
    pub fn factor(&self, start: usize, len: usize) -> Perm {
        Perm::pattern_of(&self.0[start..start + len])
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    ///
    /// Backtracking over the positions of `pattern` from left to right. Each
    /// pattern position is checked only against its nearest lower and upper
    /// neighbours among the already placed positions.
    pub fn contains(&self, pattern: &Perm) -> bool {
        let k = pattern.len();
        let n = self.len();
        if k > n {
            return false;
        }
        if k == n {
            return self == pattern;
        }
        if k == 1 {
            return true;
        }
        let bounds = neighbour_bounds(pattern.values());
        let mut chosen = vec![0usize; k];
        self.match_from(0, 0, &bounds, &mut chosen)
    }

    fn match_from(
        &self,
        depth: usize,
        from: usize,
        bounds: &[(Option<usize>, Option<usize>)],
        chosen: &mut [usize],
    ) -> bool {
        let k = bounds.len();
        if depth == k {
            return true;
        }
        let (lo, hi) = bounds[depth];
        let lo_val = lo.map(|j| self.0[chosen[j]]);
        let hi_val = hi.map(|j| self.0[chosen[j]]);
        let last = self.len() - (k - depth);
        for i in from..=last {
            let v = self.0[i];
            if lo_val.is_some_and(|l| v < l) || hi_val.is_some_and(|h| v > h) {
                continue;
            }
            chosen[depth] = i;
            if self.match_from(depth + 1, i + 1, bounds, chosen) {
                return true;
            }
        }
        false
    }

    pub fn avoids(&self, pattern: &Perm) -> bool {
        !self.contains(pattern)
    }

    pub fn avoids_all<'a>(&self, patterns: impl IntoIterator<Item = &'a Perm>) -> bool {
        patterns.into_iter().all(|p| !self.contains(p))
    }

    /// All intervals of size at least one, ordered by start then length.
    pub fn intervals(&self) -> Vec<Interval> {
        let n = self.len();
        let mut out = Vec::new();
        for start in 0..n {
            let (mut lo, mut hi) = (self.0[start], self.0[start]);
            for end in start..n {
                lo = lo.min(self.0[end]);
                hi = hi.max(self.0[end]);
                if (hi - lo) as usize == end - start {
                    out.push(Interval {
                        start: start + 1,
                        len: end - start + 1,
                    });
                }
            }
        }
        out
    }

    /// Simple: size at least 4 and no interval other than singletons and
    /// the whole permutation.
    pub fn is_simple(&self) -> bool {
        let n = self.len();
        if n < 4 {
            return false;
        }
        for start in 0..n {
            let (mut lo, mut hi) = (self.0[start], self.0[start]);
            for end in start + 1..n {
                if start == 0 && end == n - 1 {
                    break;
                }
                lo = lo.min(self.0[end]);
                hi = hi.max(self.0[end]);
                if (hi - lo) as usize == end - start {
                    return false;
                }
            }
        }
        true
    }

    /// Length of the shortest proper prefix holding the values `1..=k`, if any.
    pub(crate) fn sum_split(&self) -> Option<usize> {
        let mut max = 0;
        for (i, &v) in self.0[..self.len() - 1].iter().enumerate() {
            max = max.max(v);
            if max as usize == i + 1 {
                return Some(i + 1);
            }
        }
        None
    }

    /// Length of the shortest proper prefix holding the top `k` values, if any.
    pub(crate) fn skew_split(&self) -> Option<usize> {
        let n = self.len() as u32;
        let mut min = u32::MAX;
        for (i, &v) in self.0[..self.len() - 1].iter().enumerate() {
            min = min.min(v);
            if min == n - i as u32 {
                return Some(i + 1);
            }
        }
        None
    }

    pub fn indecomposability(&self) -> Indecomposability {
        Indecomposability {
            inc_indecomposable: self.sum_split().is_none(),
            dec_indecomposable: self.skew_split().is_none(),
        }
    }

    /// `self[args[0], ..., args[n-1]]`.
    pub fn substitute(&self, args: &[Perm]) -> Result<Perm> {
        if args.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                found: args.len(),
            });
        }
        Ok(self.inflate(args.iter().map(Some)))
    }

    /// Substitution where any argument may be empty. Empty arguments are
    /// skipped; the result is empty iff every argument is.
    pub fn gen_substitute(&self, args: &[GenArg]) -> Result<GenArg> {
        if args.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                found: args.len(),
            });
        }
        if args.iter().all(GenArg::is_empty) {
            return Ok(GenArg::Empty);
        }
        Ok(GenArg::Perm(self.inflate(args.iter().map(GenArg::as_perm))))
    }

    fn inflate<'a>(&self, args: impl Iterator<Item = Option<&'a Perm>> + Clone) -> Perm {
        let n = self.len();
        let sizes: Vec<u32> = args.clone().map(|a| a.map_or(0, |p| p.len() as u32)).collect();
        // offset[v] = total size of the arguments sitting at root values below v
        let mut by_value = vec![0u32; n + 1];
        for (i, &v) in self.0.iter().enumerate() {
            by_value[v as usize] = sizes[i];
        }
        let mut offset = vec![0u32; n + 1];
        for v in 2..=n {
            offset[v] = offset[v - 1] + by_value[v - 1];
        }
        let mut out = Vec::with_capacity(sizes.iter().sum::<u32>() as usize);
        for (i, arg) in args.enumerate() {
            if let Some(p) = arg {
                let base = offset[self.0[i] as usize];
                out.extend(p.values().iter().map(|&x| x + base));
            }
        }
        Perm(out)
    }

    /// All permutations of size `n + 1` obtained by inserting one new value.
    pub fn one_point_extensions(&self) -> Vec<Perm> {
        let n = self.len();
        let mut out = Vec::with_capacity((n + 1) * (n + 1));
        for value in 1..=n as u32 + 1 {
            let shifted: Vec<u32> = self.0.iter().map(|&x| if x >= value { x + 1 } else { x }).collect();
            for pos in 0..=n {
                let mut v = shifted.clone();
                v.insert(pos, value);
                out.push(Perm(v));
            }
        }
        out
    }

    /// Compact rendering without separators when every value is a single digit.
    pub fn compact(&self) -> String {
        if self.len() <= 9 {
            self.0.iter().map(|v| char::from(b'0' + *v as u8)).collect()
        } else {
            self.to_string()
        }
    }
}

/// For each pattern position, the earlier positions holding the nearest
/// smaller and nearest larger values.
fn neighbour_bounds(pattern: &[u32]) -> Vec<(Option<usize>, Option<usize>)> {
    (0..pattern.len())
        .map(|i| {
            let v = pattern[i];
            let mut lo: Option<usize> = None;
            let mut hi: Option<usize> = None;
            for j in 0..i {
                let w = pattern[j];
                if w < v && lo.is_none_or(|l| pattern[l] < w) {
                    lo = Some(j);
                }
                if w > v && hi.is_none_or(|h| pattern[h] > w) {
                    hi = Some(j);
                }
            }
            (lo, hi)
        })
        .collect()
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

/// Accepts space-separated values (`3 1 4 2`) or, for sizes up to 9, the
/// digit-string shorthand (`3142`).
impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm> {
        let s = s.trim();
        let values: Vec<u32> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::InvalidPerm(s.to_string())))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::InvalidPerm(s.to_string())))
                .collect::<Result<_>>()?
        };
        Perm::new(values)
    }
}

/// Argument of a generalized substitution: a permutation or the empty one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenArg {
    Empty,
    Perm(Perm),
}

impl GenArg {
    pub fn is_empty(&self) -> bool {
        matches!(self, GenArg::Empty)
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            GenArg::Empty => None,
            GenArg::Perm(p) => Some(p),
        }
    }

    pub fn len(&self) -> usize {
        self.as_perm().map_or(0, Perm::len)
    }
}

impl fmt::Display for GenArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenArg::Empty => f.write_str("0"),
            GenArg::Perm(p) => write!(f, "{p}"),
        }
    }
}

/// Consecutive positions `start..start+len` (1-based), read against a host.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub start: usize,
    pub len: usize,
}

impl Interval {
    /// Whether the positions are in range and carry consecutive values.
    pub fn is_interval_of(&self, host: &Perm) -> bool {
        if self.start == 0 || self.start + self.len - 1 > host.len() {
            return false;
        }
        if self.len == 0 {
            return true;
        }
        let vals = &host.values()[self.start - 1..self.start - 1 + self.len];
        let lo = vals.iter().min().unwrap();
        let hi = vals.iter().max().unwrap();
        (hi - lo) as usize == self.len - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Indecomposability {
    /// Not of the form `12[a, b]`.
    pub inc_indecomposable: bool,
    /// Not of the form `21[a, b]`.
    pub dec_indecomposable: bool,
}

/// Every permutation of size `n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut v: Vec<u32> = (1..=n as u32).collect();
    loop {
        out.push(Perm(v.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn brute_contains(sigma: &Perm, pattern: &Perm) -> bool {
        let (n, k) = (sigma.len(), pattern.len());
        (0u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|mask| {
            let sub: Vec<u32> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| sigma.values()[i])
                .collect();
            Perm::pattern_of(&sub) == *pattern
        })
    }

    #[test]
    fn containment_examples() {
        assert!(p("316452").contains(&p("2431")));
        assert!(!p("316452").contains(&p("2413")));
        assert!(p("316452").contains(&Perm::one()));
    }

    #[test]
    fn containment_matches_subset_scan() {
        for n in 1..=7 {
            for sigma in all_perms(n) {
                for k in 1..=4.min(n) {
                    for pat in all_perms(k) {
                        assert_eq!(sigma.contains(&pat), brute_contains(&sigma, &pat), "{sigma} {pat}");
                    }
                }
            }
        }
    }

    #[test]
    fn simplicity_examples() {
        assert!(p("3142").is_simple());
        assert!(p("2413").is_simple());
        assert!(!p("21").is_simple());
        assert!(!p("132").is_simple());
        assert!(!p("1").is_simple());
    }

    #[test]
    fn simplicity_matches_interval_scan() {
        let mut counts = vec![0usize; 9];
        for n in 1..=8 {
            for sigma in all_perms(n) {
                let nontrivial = sigma.intervals().iter().any(|iv| iv.len > 1 && iv.len < n);
                let expected = n >= 4 && !nontrivial;
                assert_eq!(sigma.is_simple(), expected, "{sigma}");
                if expected {
                    counts[n] += 1;
                }
            }
        }
        assert_eq!(&counts[4..=6], &[2, 6, 46]);
    }

    #[test]
    fn substitution_examples() {
        let r = p("132").substitute(&[p("21"), p("132"), p("1")]).unwrap();
        assert_eq!(r, p("214653"));
        assert_eq!(p("12").substitute(&[p("1"), p("1")]).unwrap(), p("12"));
        let ones = vec![Perm::one(); 4];
        assert_eq!(p("2413").substitute(&ones).unwrap(), p("2413"));
        assert!(matches!(
            p("12").substitute(&[p("1")]),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn generalized_substitution_examples() {
        let g = p("132")
            .gen_substitute(&[GenArg::Perm(p("21")), GenArg::Empty, GenArg::Perm(p("1"))])
            .unwrap();
        assert_eq!(g, GenArg::Perm(p("213")));
        // the empty argument lets the result avoid its root
        assert!(g.as_perm().unwrap().avoids(&p("132")));
        let g = p("132")
            .gen_substitute(&[GenArg::Empty, GenArg::Empty, GenArg::Perm(p("1"))])
            .unwrap();
        assert_eq!(g, GenArg::Perm(p("1")));
        assert_eq!(
            p("12").gen_substitute(&[GenArg::Empty, GenArg::Empty]).unwrap(),
            GenArg::Empty
        );
    }

    #[test]
    fn indecomposability_examples() {
        let f = Perm::one().indecomposability();
        assert!(f.inc_indecomposable && f.dec_indecomposable);
        let f = p("123").indecomposability();
        assert!(!f.inc_indecomposable && f.dec_indecomposable);
        let f = p("3142").indecomposability();
        assert!(f.inc_indecomposable && f.dec_indecomposable);
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(p("3 1 4 2"), p("3142"));
        assert_eq!(p("3 1 4 2").to_string(), "3 1 4 2");
        let big: Perm = "10 9 8 7 6 5 4 3 2 1".parse().unwrap();
        assert_eq!(big.len(), 10);
        assert!("1 1".parse::<Perm>().is_err());
        assert!("".parse::<Perm>().is_err());
        assert!("0".parse::<Perm>().is_err());
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut v = vec![p("21"), p("123"), p("12"), p("1")];
        v.sort();
        assert_eq!(v, vec![p("1"), p("12"), p("21"), p("123")]);
    }

    #[test]
    fn interval_type_checks_host() {
        let host = p("2413");
        assert!(Interval { start: 1, len: 1 }.is_interval_of(&host));
        assert!(!Interval { start: 1, len: 2 }.is_interval_of(&host));
        assert!(Interval { start: 1, len: 4 }.is_interval_of(&host));
        assert!(!Interval { start: 4, len: 2 }.is_interval_of(&host));
    }

    #[test]
    fn all_perms_is_sorted_and_complete() {
        let v = all_perms(4);
        assert_eq!(v.len(), 24);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
