//! Canonical-ideal combinatorics of Hibi rings.
//!
//! Monomials of the Hibi ring of a poset `P` correspond to order-reversing
//! maps on `P^ = P ∪ {0^, 1^}` with value 0 at the top; the canonical ideal
//! is spanned by the strictly order-reversing ones, graded by the value at
//! the bottom. Minimal ideal generators are the strict maps that cannot be
//! split off a nonzero weak map, and their count is the Cohen-Macaulay type
//! of the ring. Everything here is an exact finite search: enumeration by
//! DFS over a natural labeling with per-element value intervals, and a
//! decomposability test that walks candidate weak summands top-down.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poset::Poset;

/// Default cap on the poset size for generator enumeration; the search is
/// exponential in the number of elements.
pub const DEFAULT_SIZE_CAP: usize = 12;

/// An integer map on `P^` with `v(1^) = 0` stored implicitly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderReversingMap {
    /// `values[i] = v(x_{i+1})` on the poset elements.
    values: Vec<u32>,
    /// `v(0^)`, the degree of the associated monomial.
    bottom: u32,
}

impl OrderReversingMap {
    pub fn new(values: Vec<u32>, bottom: u32) -> OrderReversingMap {
        OrderReversingMap { values, bottom }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// The monomial degree `v(0^)`.
    pub fn degree(&self) -> u32 {
        self.bottom
    }

    /// Strictly order-reversing on `P^`: values strictly decrease along
    /// every cover going up, every value is positive (from the top element)
    /// and the bottom value strictly dominates all of `P`.
    pub fn is_strict(&self, poset: &Poset) -> bool {
        if self.values.len() != poset.len() {
            return false;
        }
        if self.values.iter().any(|&v| v == 0) {
            return false;
        }
        if let Some(&max) = self.values.iter().max() {
            if self.bottom <= max {
                return false;
            }
        }
        poset
            .covers()
            .into_iter()
            .all(|(i, j)| self.values[i] > self.values[j])
    }
}

/// Smallest possible degree of a strictly order-reversing map: one more
/// than the longest chain of `P` (the longest chain of `P^` has two more
/// elements and values must strictly decrease up it from `v(0^)` to 0).
pub fn min_strict_degree(poset: &Poset) -> u32 {
    poset.longest_chain() as u32 + 1
}

/// All strictly order-reversing maps with degree at most `degree_cap`,
/// in a sorted canonical order. A cap below the minimum yields no maps.
pub fn enumerate_strict_maps(poset: &Poset, degree_cap: u32) -> Vec<OrderReversingMap> {
    let n = poset.len();
    if degree_cap < min_strict_degree(poset) {
        return Vec::new();
    }

    // Longest chain strictly below each element, in elements.
    let mut height_below = vec![0u32; n];
    for i in 0..n {
        height_below[i] = (0..i)
            .filter(|&j| poset.less(j, i))
            .map(|j| height_below[j] + 1)
            .max()
            .unwrap_or(0);
    }
    let mut upper_covers = vec![Vec::new(); n];
    for (i, j) in poset.covers() {
        upper_covers[i].push(j);
    }

    let mut values = vec![0u32; n];
    let mut out = Vec::new();
    // Natural labeling: processing indices downward visits upper covers
    // before the elements they constrain.
    fn assign(
        idx: usize,
        n: usize,
        cap: u32,
        values: &mut Vec<u32>,
        upper_covers: &[Vec<usize>],
        height_below: &[u32],
        out: &mut Vec<OrderReversingMap>,
    ) {
        if idx == usize::MAX {
            let max = *values.iter().max().expect("nonempty poset");
            for bottom in max + 1..=cap {
                out.push(OrderReversingMap::new(values.clone(), bottom));
            }
            return;
        }
        let lo = upper_covers[idx]
            .iter()
            .map(|&j| values[j] + 1)
            .max()
            .unwrap_or(1);
        let hi = cap - 1 - height_below[idx];
        for v in lo..=hi {
            values[idx] = v;
            assign(
                idx.checked_sub(1).unwrap_or(usize::MAX),
                n,
                cap,
                values,
                upper_covers,
                height_below,
                out,
            );
        }
    }
    assign(
        n - 1,
        n,
        degree_cap,
        &mut values,
        &upper_covers,
        &height_below,
        &mut out,
    );
    out.sort();
    out
}

/// The explicit generator witnesses on the `pm` family: for `1 <= i <= m-1`
/// the map sending `x_j` to `m + 1 - (j+1)/2` for odd `j` and to
/// `m + i - j/2` for even `j`, extended by the smallest strict bottom value.
pub fn make_witness(m: usize, i: usize) -> Result<OrderReversingMap> {
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "the pm family needs m >= 3, got {m}"
        )));
    }
    if i < 1 || i > m - 1 {
        return Err(Error::InvalidInput(format!(
            "witness index must satisfy 1 <= i <= {}, got {i}",
            m - 1
        )));
    }
    let mut values = Vec::with_capacity(2 * m);
    for j in 1..=2 * m {
        let v = if j % 2 == 1 {
            m + 1 - (j + 1) / 2
        } else {
            m + i - j / 2
        };
        values.push(v as u32);
    }
    let max = *values.iter().max().expect("nonempty");
    Ok(OrderReversingMap::new(values, max + 1))
}

/// True iff `v` splits as `v = (v - w) + w` with `w` a nonzero weak
/// order-reversing map and `v - w` still strictly order-reversing; such a
/// map is a product in the ideal and never a minimal generator.
pub fn is_decomposable(map: &OrderReversingMap, poset: &Poset) -> Result<bool> {
    let n = poset.len();
    if map.values.len() != n {
        return Err(Error::InvalidInput(
            "map size does not match the poset".into(),
        ));
    }
    if !map.is_strict(poset) {
        return Err(Error::InvalidInput(
            "decomposability is defined for strictly order-reversing maps".into(),
        ));
    }
    let mut upper_covers = vec![Vec::new(); n];
    for (i, j) in poset.covers() {
        upper_covers[i].push(j);
    }
    let minimal = poset.minimal_elements();
    let v = &map.values;
    let bottom_v = map.bottom as i64;

    // Assign w top-down; every prefix keeps v - w strict above the cut.
    fn search(
        idx: usize,
        n: usize,
        v: &[u32],
        bottom_v: i64,
        w: &mut Vec<i64>,
        upper_covers: &[Vec<usize>],
        minimal: &[usize],
    ) -> bool {
        if idx == usize::MAX {
            // Bottom value of w: weakly dominates P, and v - w must stay
            // strict from the bottom element up into the minimal elements.
            let lo = minimal.iter().map(|&i| w[i]).max().unwrap_or(0);
            let hi = minimal
                .iter()
                .map(|&i| bottom_v - v[i] as i64 + w[i] - 1)
                .min()
                .unwrap_or(bottom_v - 1);
            let any_positive = w.iter().any(|&x| x > 0);
            let lo = if any_positive { lo } else { lo.max(1) };
            return lo <= hi;
        }
        let lo = upper_covers[idx].iter().map(|&j| w[j]).max().unwrap_or(0);
        let hi = upper_covers[idx]
            .iter()
            .map(|&j| w[j] + v[idx] as i64 - v[j] as i64 - 1)
            .min()
            .unwrap_or(v[idx] as i64 - 1);
        for cand in lo..=hi {
            w[idx] = cand;
            if search(
                idx.checked_sub(1).unwrap_or(usize::MAX),
                n,
                v,
                bottom_v,
                w,
                upper_covers,
                minimal,
            ) {
                return true;
            }
        }
        w[idx] = 0;
        false
    }

    let mut w = vec![0i64; n];
    Ok(search(n - 1, n, v, bottom_v, &mut w, &upper_covers, &minimal))
}

/// The minimal generators of the canonical ideal, with their degree data.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub generators: Vec<OrderReversingMap>,
    /// Multiset of generator degrees `v(0^)`.
    pub degree_histogram: BTreeMap<u32, u64>,
    pub cm_type: u64,
    /// Smallest strict degree (minus the a-invariant).
    pub min_degree: u32,
    /// Socle degree `#P - (longest chain)`.
    pub socle_degree: usize,
}

impl GeneratorSet {
    /// Histogram re-indexed relative to the minimal degree, padded over
    /// `j = 0..=max(s, 1) - 1`; this is the shape the classifier consumes.
    pub fn relative_degree_histogram(&self) -> Vec<BigInt> {
        let len = self.socle_degree.max(1);
        let mut out = vec![BigInt::from(0u32); len];
        for (&deg, &count) in &self.degree_histogram {
            let j = (deg - self.min_degree) as usize;
            out[j] += BigInt::from(count);
        }
        out
    }
}

/// Enumerates minimal generators with the default poset size cap.
pub fn minimal_generators(poset: &Poset) -> Result<GeneratorSet> {
    minimal_generators_with_cap(poset, DEFAULT_SIZE_CAP)
}

/// Enumerates minimal generators of the canonical ideal exhaustively.
///
/// Every minimal generator has degree in the window
/// `[m_0, m_0 + max(s, 1) - 1]` where `m_0` is the minimal strict degree
/// and `s` the socle degree, because the type is the sum of the generator
/// counts over exactly those degrees.
pub fn minimal_generators_with_cap(poset: &Poset, size_cap: usize) -> Result<GeneratorSet> {
    if poset.len() > size_cap {
        return Err(Error::SizeCap(format!(
            "generator enumeration is capped at {size_cap} elements (poset has {}); \
             raise the cap explicitly to override",
            poset.len()
        )));
    }
    let min_degree = min_strict_degree(poset);
    let socle_degree = poset.len() - poset.longest_chain();
    let window_top = min_degree + socle_degree.max(1) as u32 - 1;

    let mut generators = Vec::new();
    let mut degree_histogram: BTreeMap<u32, u64> = BTreeMap::new();
    for map in enumerate_strict_maps(poset, window_top) {
        if !is_decomposable(&map, poset)? {
            *degree_histogram.entry(map.degree()).or_insert(0) += 1;
            generators.push(map);
        }
    }
    let cm_type = generators.len() as u64;
    Ok(GeneratorSet {
        generators,
        degree_histogram,
        cm_type,
        min_degree,
        socle_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_strict_maps() {
        let p = Poset::antichain(1).unwrap();
        let maps = enumerate_strict_maps(&p, 2);
        assert_eq!(maps, vec![OrderReversingMap::new(vec![1], 2)]);
        assert_eq!(min_strict_degree(&p), 2);
    }

    #[test]
    fn two_antichain_strict_maps_at_minimal_cap() {
        let p = Poset::antichain(2).unwrap();
        let maps = enumerate_strict_maps(&p, 2);
        assert_eq!(maps, vec![OrderReversingMap::new(vec![1, 1], 2)]);
        // Cap 3 allows values in {1, 2}^2 with any strictly larger bottom:
        // (1,1) admits bottoms 2 and 3, the other three combinations only 3.
        let maps = enumerate_strict_maps(&p, 3);
        assert_eq!(maps.len(), 5);
        assert!(enumerate_strict_maps(&p, 1).is_empty());
    }

    #[test]
    fn witness_values_match_the_formula() {
        let v1 = make_witness(3, 1).unwrap();
        assert_eq!(v1.values(), &[3, 3, 2, 2, 1, 1]);
        assert_eq!(v1.degree(), 4);
        let v2 = make_witness(3, 2).unwrap();
        assert_eq!(v2.values(), &[3, 4, 2, 3, 1, 2]);
        assert_eq!(v2.degree(), 5);
        assert!(make_witness(3, 3).is_err());
        assert!(make_witness(2, 1).is_err());
    }

    #[test]
    fn witnesses_are_strict_maps() {
        for m in 3..=5 {
            let poset = Poset::family_pm(m).unwrap();
            for i in 1..=m - 1 {
                let w = make_witness(m, i).unwrap();
                assert!(w.is_strict(&poset), "witness m={m} i={i}");
                // The witness appears in the enumeration window.
                let all = enumerate_strict_maps(&poset, w.degree());
                assert!(all.contains(&w));
            }
        }
    }

    #[test]
    fn chain_maps_decompose_exactly_when_scaled() {
        let chain = Poset::chain(3).unwrap();
        // The minimal strict map is not decomposable.
        let minimal = OrderReversingMap::new(vec![3, 2, 1], 4);
        assert!(!is_decomposable(&minimal, &chain).unwrap());
        // Twice the minimal strict map splits off one copy weakly.
        let doubled = OrderReversingMap::new(vec![6, 4, 2], 8);
        assert!(is_decomposable(&doubled, &chain).unwrap());
        // Raising only the bottom degree splits off a pure degree shift.
        let shifted = OrderReversingMap::new(vec![3, 2, 1], 5);
        assert!(is_decomposable(&shifted, &chain).unwrap());
    }

    #[test]
    fn chain_posets_have_type_one() {
        for n in 1..=5 {
            let gens = minimal_generators(&Poset::chain(n).unwrap()).unwrap();
            assert_eq!(gens.cm_type, 1, "chain of {n}");
            assert_eq!(gens.socle_degree, 0);
        }
    }

    #[test]
    fn pm_and_qm_types_for_m_three() {
        let p3 = minimal_generators(&Poset::family_pm(3).unwrap()).unwrap();
        assert_eq!(p3.cm_type, 2);
        assert_eq!(p3.min_degree, 4);
        assert_eq!(p3.socle_degree, 3);

        let q3 = minimal_generators(&Poset::family_qm(3).unwrap()).unwrap();
        assert_eq!(q3.cm_type, 3);
    }

    #[test]
    fn pm_witnesses_are_minimal_generators() {
        for m in 3..=4 {
            let poset = Poset::family_pm(m).unwrap();
            let gens = minimal_generators(&poset).unwrap();
            for i in 1..=m - 1 {
                let w = make_witness(m, i).unwrap();
                assert!(
                    gens.generators.contains(&w),
                    "witness m={m} i={i} missing from the minimal generators"
                );
                assert!(!is_decomposable(&w, &poset).unwrap());
            }
        }
    }

    #[test]
    fn degree_window_is_sound_for_small_posets() {
        for poset in [
            Poset::chain(4).unwrap(),
            Poset::antichain(3).unwrap(),
            Poset::family_pm(3).unwrap(),
            Poset::family_qm(3).unwrap(),
            Poset::from_covers(4, &[(1, 3), (2, 3), (2, 4)]).unwrap(),
        ] {
            let gens = minimal_generators(&poset).unwrap();
            let beyond = gens.min_degree + gens.socle_degree.max(1) as u32;
            for map in enumerate_strict_maps(&poset, beyond) {
                if map.degree() == beyond {
                    assert!(
                        is_decomposable(&map, &poset).unwrap(),
                        "non-decomposable map beyond the degree window"
                    );
                }
            }
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let big = Poset::antichain(13).unwrap();
        assert!(matches!(
            minimal_generators(&big),
            Err(Error::SizeCap(_))
        ));
        assert!(minimal_generators_with_cap(&Poset::antichain(3).unwrap(), 3).is_ok());
    }

    #[test]
    fn relative_histogram_shape() {
        let gens = minimal_generators(&Poset::family_pm(3).unwrap()).unwrap();
        let rel = gens.relative_degree_histogram();
        assert_eq!(rel.len(), 3);
        let total: BigInt = rel.iter().sum();
        assert_eq!(total, BigInt::from(gens.cm_type));
    }
}
