//! Finite posets with natural labelings, linear extensions as permutations,
//! and descent statistics.
//!
//! Elements are `x_1, ..., x_n`. Construction validates the strict order
//! (irreflexive, antisymmetric, transitive after closure) and canonically
//! relabels by a deterministic topological sort so that `x_i < x_j` implies
//! `i < j`; the relabeling is kept so that externally fixed labelings remain
//! reproducible. A linear extension is encoded as the word listing element
//! indices in the order they are taken, which identifies the set of
//! extensions with a set of permutations closed under descent statistics.

use std::fmt;

use num_bigint::BigInt;

use crate::ehrhart::HVector;
use crate::error::{Error, Result};

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &a in &word {
            if a == 0 || a > n || seen[a] {
                return Err(Error::InvalidInput(format!(
                    "word {word:?} is not a permutation of 1..={n}"
                )));
            }
            seen[a] = true;
        }
        Ok(Permutation(word))
    }

    /// Parses compact digit notation like `"13246857"` (single digits only).
    pub fn from_compact(s: &str) -> Result<Self> {
        let word: Option<Vec<usize>> =
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        match word {
            Some(w) => Permutation::new(w),
            None => Err(Error::InvalidInput(format!(
                "cannot read {s:?} as a compact permutation"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// Positions `i` (1-based, `i < n`) with `w(i) > w(i+1)`.
    pub fn descent_set(&self) -> Vec<usize> {
        (1..self.0.len())
            .filter(|&i| self.0[i - 1] > self.0[i])
            .collect()
    }

    pub fn descent_count(&self) -> usize {
        self.descent_set().len()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (pos, &val) in self.0.iter().enumerate() {
            inv[val - 1] = pos + 1;
        }
        Permutation(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() <= 9 {
            for a in &self.0 {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let words: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
            write!(f, "{}", words.join(" "))
        }
    }
}

/// A finite poset on `{x_1, ..., x_n}` carrying a natural labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// Strict order as a closed relation table: `less[i * n + j]`.
    less: Vec<bool>,
    /// `relabeling[new] = old` 1-based element index before canonicalization.
    relabeling: Vec<usize>,
}

impl Poset {
    /// Builds a poset from 1-based cover (or relation) pairs `a < b`.
    ///
    /// The relation is closed transitively; cycles are rejected with a
    /// diagnostic path. Labels are canonicalized to a natural order.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        if n == 0 {
            return Err(Error::InvalidInput("poset must be nonempty".into()));
        }
        let mut less = vec![false; n * n];
        for &(a, b) in covers {
            if a == 0 || a > n || b == 0 || b > n {
                return Err(Error::InvalidInput(format!(
                    "relation {a} < {b} out of range 1..={n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("reflexive relation {a} < {a}")));
            }
            less[(a - 1) * n + (b - 1)] = true;
        }

        // Transitive closure.
        for k in 0..n {
            for i in 0..n {
                if !less[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if less[k * n + j] {
                        less[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            if less[i * n + i] {
                let cycle = find_cycle(n, &less, i);
                return Err(Error::InvalidInput(format!(
                    "relations contain a cycle: {}",
                    cycle
                        .iter()
                        .map(|v| format!("x{}", v + 1))
                        .collect::<Vec<_>>()
                        .join(" < ")
                )));
            }
        }

        // Canonical natural labeling: repeatedly take the minimal element
        // with the smallest original index.
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for _ in 0..n {
            let next = (0..n)
                .find(|&i| {
                    !placed[i] && (0..n).all(|j| placed[j] || !less[j * n + i])
                })
                .expect("acyclic relation always has a minimal element");
            placed[next] = true;
            order.push(next);
        }
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut relabeled = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                if less[i * n + j] {
                    relabeled[position[i] * n + position[j]] = true;
                }
            }
        }
        Ok(Poset {
            n,
            less: relabeled,
            relabeling: order.iter().map(|&i| i + 1).collect(),
        })
    }

    /// The `n`-element chain `x_1 < x_2 < ... < x_n`.
    pub fn chain(n: usize) -> Result<Poset> {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        Poset::from_covers(n, &covers)
    }

    /// The `n`-element antichain.
    pub fn antichain(n: usize) -> Result<Poset> {
        Poset::from_covers(n, &[])
    }

    /// The `2m`-element poset made of the two chains
    /// `x_1 < x_3 < ... < x_{2m-1}` and `x_2 < x_4 < ... < x_{2m}`
    /// linked by the single cross relation `x_1 < x_{2m}`.
    pub fn family_pm(m: usize) -> Result<Poset> {
        if m < 3 {
            return Err(Error::InvalidInput(format!(
                "the pm family needs m >= 3, got {m}"
            )));
        }
        let mut covers = Vec::new();
        for k in 1..m {
            covers.push((2 * k - 1, 2 * k + 1));
            covers.push((2 * k, 2 * k + 2));
        }
        covers.push((1, 2 * m));
        Poset::from_covers(2 * m, &covers)
    }

    /// The pm poset with the extra cross relation `x_2 < x_{2m-1}`.
    pub fn family_qm(m: usize) -> Result<Poset> {
        if m < 3 {
            return Err(Error::InvalidInput(format!(
                "the qm family needs m >= 3, got {m}"
            )));
        }
        let mut covers = Vec::new();
        for k in 1..m {
            covers.push((2 * k - 1, 2 * k + 1));
            covers.push((2 * k, 2 * k + 2));
        }
        covers.push((1, 2 * m));
        covers.push((2, 2 * m - 1));
        Poset::from_covers(2 * m, &covers)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Strict comparability of 0-based elements.
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i * self.n + j]
    }

    /// Map from canonical position (0-based) to the original 1-based label.
    pub fn relabeling(&self) -> &[usize] {
        &self.relabeling
    }

    /// Cover relations as 0-based pairs `(i, j)` with `x_i` covered by `x_j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less(i, j)
                    && !(0..n).any(|k| self.less(i, k) && self.less(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| (0..self.n).all(|j| !self.less(j, i)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| (0..self.n).all(|j| !self.less(i, j)))
            .collect()
    }

    /// Number of elements in a longest chain.
    pub fn longest_chain(&self) -> usize {
        let mut memo = vec![0usize; self.n];
        // Natural labeling: predecessors always have smaller index.
        for i in 0..self.n {
            let below = (0..i)
                .filter(|&j| self.less(j, i))
                .map(|j| memo[j])
                .max()
                .unwrap_or(0);
            memo[i] = below + 1;
        }
        memo.into_iter().max().unwrap_or(0)
    }

    /// All down-closed subsets as bitmasks (bit `i` = element `x_{i+1}`).
    pub fn down_sets(&self) -> Result<Vec<u64>> {
        if self.n > 24 {
            return Err(Error::SizeCap(format!(
                "down-set enumeration is capped at 24 elements, got {}",
                self.n
            )));
        }
        let n = self.n;
        let mut strictly_below = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if self.less(j, i) {
                    strictly_below[i] |= 1 << j;
                }
            }
        }
        let mut out = Vec::new();
        'mask: for mask in 0u64..(1 << n) {
            for i in 0..n {
                if mask & (1 << i) != 0 && mask & strictly_below[i] != strictly_below[i] {
                    continue 'mask;
                }
            }
            out.push(mask);
        }
        Ok(out)
    }

    /// All linear extensions, each as the word of element indices in the
    /// order they are taken. This is exactly the set of permutations
    /// associated with order-preserving bijections onto `{1, ..., n}`.
    pub fn linear_extensions(&self) -> Vec<Permutation> {
        let n = self.n;
        let mut indegree = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if self.less(i, j) {
                    indegree[j] += 1;
                }
            }
        }
        let mut taken = vec![false; n];
        let mut word = Vec::with_capacity(n);
        let mut out = Vec::new();
        extend(self, &mut indegree, &mut taken, &mut word, &mut out);
        out
    }

    /// Number of linear extensions, via the same backtracking.
    pub fn extension_count(&self) -> u64 {
        self.linear_extensions().len() as u64
    }

    /// Reads the poset text format: a header `elements n`, then one
    /// relation `i < j` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Poset> {
        let mut n: Option<usize> = None;
        let mut covers = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if n.is_none() {
                let rest = line.strip_prefix("elements").ok_or(Error::Parse {
                    line: lineno,
                    message: format!("expected `elements n` header, found {line:?}"),
                })?;
                let count: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("cannot read element count from {line:?}"),
                })?;
                n = Some(count);
                continue;
            }
            let mut parts = line.split('<');
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a.trim(), b.trim()),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("expected `i < j`, found {line:?}"),
                    })
                }
            };
            let parse = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("cannot read element index {s:?}"),
                })
            };
            covers.push((parse(a)?, parse(b)?));
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            message: "missing `elements n` header".into(),
        })?;
        Poset::from_covers(n, &covers)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("elements {}\n", self.n);
        for (i, j) in self.covers() {
            out.push_str(&format!("{} < {}\n", i + 1, j + 1));
        }
        out
    }
}

fn extend(
    poset: &Poset,
    indegree: &mut [usize],
    taken: &mut [bool],
    word: &mut Vec<usize>,
    out: &mut Vec<Permutation>,
) {
    let n = poset.len();
    if word.len() == n {
        out.push(Permutation(word.clone()));
        return;
    }
    for i in 0..n {
        if taken[i] || indegree[i] > 0 {
            continue;
        }
        taken[i] = true;
        word.push(i + 1);
        for j in 0..n {
            if poset.less(i, j) {
                indegree[j] -= 1;
            }
        }
        extend(poset, indegree, taken, word, out);
        for j in 0..n {
            if poset.less(i, j) {
                indegree[j] += 1;
            }
        }
        word.pop();
        taken[i] = false;
    }
}

fn find_cycle(n: usize, less: &[bool], start: usize) -> Vec<usize> {
    // `less` is transitively closed and `start < start`, so some directed
    // cycle through `start` exists in the original relation; recover one
    // greedily through successors that can reach `start`.
    let mut path = vec![start];
    let mut current = start;
    loop {
        let next = (0..n)
            .find(|&j| less[current * n + j] && (less[j * n + start] || j == start))
            .expect("cycle successor exists");
        if next == start {
            path.push(start);
            return path;
        }
        if path.contains(&next) {
            return path;
        }
        path.push(next);
        current = next;
    }
}

/// The descent-statistic h-vector of a poset, together with the extension
/// count and the socle degree `#P - (longest chain)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentProfile {
    pub h: HVector,
    pub extension_count: u64,
    pub socle_degree: usize,
}

/// Computes the set of order-preserving bijections of a poset, read as
/// permutations.
pub fn order_preserving_permutations(poset: &Poset) -> Vec<Permutation> {
    poset.linear_extensions()
}

/// Histogram of descent counts over all linear extensions, stripped of
/// trailing zeros.
pub fn h_vector_from_descents(poset: &Poset) -> Result<DescentProfile> {
    let extensions = poset.linear_extensions();
    let mut histogram = vec![0u64; poset.len()];
    for perm in &extensions {
        histogram[perm.descent_count()] += 1;
    }
    let h = HVector::new(histogram.iter().map(|&c| BigInt::from(c)).collect())?;
    Ok(DescentProfile {
        h,
        extension_count: extensions.len() as u64,
        socle_degree: poset.len() - poset.longest_chain(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn paper_poset() -> Poset {
        Poset::from_covers(4, &[(1, 3), (2, 3), (2, 4)]).unwrap()
    }

    #[test]
    fn descents_of_fixed_words() {
        let p = Permutation::from_compact("13246857").unwrap();
        assert_eq!(p.descent_set(), vec![2, 6]);
        assert_eq!(p.descent_count(), 2);

        let id = Permutation::new((1..=6).collect()).unwrap();
        assert!(id.descent_set().is_empty());

        let p = Permutation::from_compact("2413").unwrap();
        assert_eq!(p.descent_set(), vec![2]);
    }

    #[test]
    fn permutation_validation_and_inverse() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        let p = Permutation::from_compact("2413").unwrap();
        assert_eq!(p.inverse().word(), &[3, 1, 4, 2]);
        assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn four_element_example_extensions() {
        let got: BTreeSet<String> = paper_poset()
            .linear_extensions()
            .iter()
            .map(|p| p.to_string())
            .collect();
        let want: BTreeSet<String> = ["1234", "2134", "1243", "2143", "2413"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn chain_and_antichain_extensions() {
        assert_eq!(Poset::chain(3).unwrap().extension_count(), 1);
        assert_eq!(Poset::antichain(3).unwrap().extension_count(), 6);
    }

    #[test]
    fn descent_histogram_of_the_four_element_example() {
        let profile = h_vector_from_descents(&paper_poset()).unwrap();
        assert_eq!(profile.h.coeffs_u64(), vec![1, 3, 1]);
        assert_eq!(profile.extension_count, 5);
        assert_eq!(profile.socle_degree, 2);
    }

    #[test]
    fn chain_descent_histogram_is_trivial() {
        let profile = h_vector_from_descents(&Poset::chain(5).unwrap()).unwrap();
        assert_eq!(profile.h.coeffs_u64(), vec![1]);
        assert_eq!(profile.socle_degree, 0);
    }

    #[test]
    fn pm_family_shape() {
        let p3 = Poset::family_pm(3).unwrap();
        assert_eq!(p3.len(), 6);
        let covers: BTreeSet<(usize, usize)> = p3.covers().into_iter().collect();
        let want: BTreeSet<(usize, usize)> =
            [(0, 2), (2, 4), (1, 3), (3, 5), (0, 5)].into_iter().collect();
        assert_eq!(covers, want);
        assert_eq!(p3.longest_chain(), 3);

        let p4 = Poset::family_pm(4).unwrap();
        assert_eq!(p4.len(), 8);
        assert_eq!(p4.covers().len(), 7);
        assert!(Poset::family_pm(2).is_err());
    }

    #[test]
    fn qm_extends_pm() {
        let m = 3;
        let pm = Poset::family_pm(m).unwrap();
        let qm = Poset::family_qm(m).unwrap();
        for i in 0..2 * m {
            for j in 0..2 * m {
                if pm.less(i, j) {
                    assert!(qm.less(i, j));
                }
            }
        }
        assert!(qm.less(1, 4)); // x2 < x5 = x_{2m-1}
        assert_eq!(qm.longest_chain(), 3);
    }

    #[test]
    fn cycle_detection_reports_a_path() {
        let err = Poset::from_covers(3, &[(1, 2), (2, 3), (3, 1)]).unwrap_err();
        match err {
            Error::InvalidInput(msg) => assert!(msg.contains("cycle"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn canonical_relabeling_restores_naturality() {
        // Same abstract poset as the paper example but scrambled labels.
        let p = Poset::from_covers(4, &[(4, 1), (3, 1), (3, 2)]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if p.less(i, j) {
                    assert!(i < j, "labeling not natural: {i} < {j}");
                }
            }
        }
        let profile = h_vector_from_descents(&p).unwrap();
        assert_eq!(profile.h.coeffs_u64(), vec![1, 3, 1]);
    }

    #[test]
    fn down_sets_of_the_paper_example() {
        let ideals = paper_poset().down_sets().unwrap();
        assert_eq!(ideals.len(), 8);
        // Complementation maps down-sets to up-sets, so the counts agree.
        let n = 4;
        let filters: Vec<u64> = ideals.iter().map(|m| !m & ((1 << n) - 1)).collect();
        let mut sorted = filters.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# demo poset\nelements 4\n1 < 3\n2 < 3\n\n2 < 4\n";
        let p = Poset::parse(text).unwrap();
        assert_eq!(p, paper_poset());
        let again = Poset::parse(&p.to_text()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Poset::parse("elements 3\n1 < ") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match Poset::parse("1 < 2") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
