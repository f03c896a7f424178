//! From lattice-point counts to h*-vectors, socle degrees, reciprocity and
//! integer-decomposition probes.
//!
//! For a full-dimensional lattice polytope of dimension `d` the counting
//! function `L(n) = #(nP ∩ Z^d)` determines the h*-vector through the
//! inverse binomial transform
//! `h*_i = sum_{j=0..i} (-1)^j C(d+1, j) L(i-j)`,
//! and conversely `L(n) = sum_i h*_i C(n+d-i, d)`. Everything here is exact
//! integer arithmetic; a negative coefficient is reported as an internal
//! error because it can only mean a counting bug.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;

/// The coefficient sequence `(h_0, ..., h_s)` of a Hilbert-series numerator,
/// with `h_0 = 1`, all entries nonnegative and `h_s != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HVector {
    coeffs: Vec<BigInt>,
}

impl HVector {
    /// Validates and normalizes a coefficient list: trailing zeros are
    /// stripped, `h_0` must be 1 and no entry may be negative.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<HVector> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty h-vector".into()));
        }
        if !coeffs[0].is_one() {
            return Err(Error::InvalidInput(format!(
                "h-vector must start with 1, got {}",
                coeffs[0]
            )));
        }
        if coeffs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("h-vector entries must be nonnegative".into()));
        }
        Ok(HVector { coeffs })
    }

    pub fn from_u64(coeffs: &[u64]) -> Result<HVector> {
        HVector::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Entries as `u64`, for compact assertions; panics on overflow.
    pub fn coeffs_u64(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| c.to_u64().expect("h-vector entry exceeds u64"))
            .collect()
    }

    /// Socle degree: the index of the last nonzero entry.
    pub fn socle_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Entry access with zero padding beyond the socle degree.
    pub fn get(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", words.join(", "))
    }
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Evaluates `L(n) = sum_i h_i * C(n + d - i, d)` from an h*-vector.
pub fn count_from_hstar(h: &HVector, dim: usize, n: usize) -> BigInt {
    h.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if n + dim < i {
                BigInt::zero()
            } else {
                c * binomial(n + dim - i, dim)
            }
        })
        .sum()
}

/// The h*-vector of a lattice polytope, from counts at dilates `0..=d`.
pub fn h_star(polytope: &LatticePolytope) -> Result<HVector> {
    let d = polytope.dim();
    let counts: Vec<BigInt> = (0..=d as u64)
        .map(|n| polytope.count_points(n, false))
        .collect::<Result<_>>()?;
    h_star_from_counts(&counts, d)
}

fn h_star_from_counts(counts: &[BigInt], dim: usize) -> Result<HVector> {
    let mut coeffs = Vec::with_capacity(dim + 1);
    for i in 0..=dim {
        let mut value = BigInt::zero();
        for j in 0..=i {
            let term = binomial(dim + 1, j) * &counts[i - j];
            if j % 2 == 0 {
                value += term;
            } else {
                value -= term;
            }
        }
        if value.is_negative() {
            return Err(Error::Internal(format!(
                "negative h* coefficient at index {i}: counting is inconsistent"
            )));
        }
        coeffs.push(value);
    }
    if !coeffs[0].is_one() {
        return Err(Error::Internal("h*_0 must be 1".into()));
    }
    HVector::new(coeffs)
}

/// Socle degree from the geometric side: `d + 1 - min{ m >= 1 : m int(P)
/// contains a lattice point }`. The minimum always exists by `m = d + 1`.
pub fn socle_degree_geometric(polytope: &LatticePolytope) -> Result<usize> {
    let d = polytope.dim();
    for m in 1..=(d as u64 + 1) {
        if polytope.count_points(m, true)?.is_positive() {
            return Ok(d + 1 - m as usize);
        }
    }
    Err(Error::Internal(
        "no interior lattice point up to dilate d + 1".into(),
    ))
}

/// Counting data of one polytope: boundary-inclusive and interior counts up
/// to a common bound, the h*-vector, and the geometric socle degree.
#[derive(Debug, Clone)]
pub struct EhrhartProfile {
    pub dim: usize,
    /// `counts[n] = L(n)` for `n = 0..=n_max`.
    pub counts: Vec<BigInt>,
    pub hstar: HVector,
    pub geometric_socle: usize,
    /// `interior_counts[n - 1] = L_int(n)` for `n = 1..=n_max`.
    pub interior_counts: Vec<BigInt>,
}

impl EhrhartProfile {
    /// Computes counts for `n = 0..=n_max` (at least up to the dimension)
    /// plus all interior counts, and derives the h*-vector.
    pub fn compute(polytope: &LatticePolytope, n_max: usize) -> Result<EhrhartProfile> {
        let d = polytope.dim();
        let n_max = n_max.max(d);
        let counts: Vec<BigInt> = (0..=n_max as u64)
            .map(|n| polytope.count_points(n, false))
            .collect::<Result<_>>()?;
        let interior_counts: Vec<BigInt> = (1..=n_max as u64)
            .map(|n| polytope.count_points(n, true))
            .collect::<Result<_>>()?;
        let hstar = h_star_from_counts(&counts[..=d], d)?;
        let geometric_socle = socle_degree_geometric(polytope)?;
        Ok(EhrhartProfile {
            dim: d,
            counts,
            hstar,
            geometric_socle,
            interior_counts,
        })
    }

    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Ehrhart reciprocity as an independent consistency oracle: the interior
/// counting function must match the reversed numerator
/// `t^{d+1} h*(1/t)`, i.e. `L_int(n) = sum_j h*_{d+1-j} C(n + d - j, d)`.
pub fn reciprocity_check(profile: &EhrhartProfile) -> Result<bool> {
    let d = profile.dim;
    if profile.n_max() < d {
        return Err(Error::InvalidInput(
            "reciprocity check needs counts at least up to the dimension".into(),
        ));
    }
    for n in 1..=profile.n_max() {
        let mut predicted = BigInt::zero();
        for j in 1..=d + 1 {
            let rev = if d + 1 - j <= profile.hstar.socle_degree() {
                profile.hstar.get(d + 1 - j)
            } else {
                BigInt::zero()
            };
            if n + d >= j {
                predicted += rev * binomial(n + d - j, d);
            }
        }
        if predicted != profile.interior_counts[n - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that the counts regenerate from the h*-vector; used with one
/// extra dilate as an extrapolation check.
pub fn counts_match_hstar(profile: &EhrhartProfile) -> bool {
    profile
        .counts
        .iter()
        .enumerate()
        .all(|(n, c)| count_from_hstar(&profile.hstar, profile.dim, n) == *c)
}

/// Integer-decomposition probe: for each `n = 2..=n_max`, is every lattice
/// point of `nP` a sum of `n` lattice points of `P`? Decided by a sum-set
/// dynamic program over exact point lists.
pub fn idp_check(polytope: &LatticePolytope, n_max: usize) -> Result<BTreeMap<usize, bool>> {
    if n_max < 2 {
        return Err(Error::InvalidInput("idp check needs n_max >= 2".into()));
    }
    let base: Vec<Vec<i64>> = polytope.lattice_points(1)?;
    let mut reachable: HashSet<Vec<i64>> = base.iter().cloned().collect();
    let mut out = BTreeMap::new();
    for n in 2..=n_max {
        let mut next: HashSet<Vec<i64>> = HashSet::new();
        for a in &reachable {
            for b in &base {
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                next.insert(sum);
            }
        }
        let target = polytope.lattice_points(n as u64)?;
        let covered = target.iter().all(|p| next.contains(p));
        out.insert(n, covered);
        reachable = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn segment(len: i64) -> LatticePolytope {
        LatticePolytope::from_vertices(1, vec![vec![bi(0)], vec![bi(len)]]).unwrap()
    }

    fn unit_square() -> LatticePolytope {
        LatticePolytope::from_vertices(
            2,
            vec![
                vec![bi(0), bi(0)],
                vec![bi(1), bi(0)],
                vec![bi(0), bi(1)],
                vec![bi(1), bi(1)],
            ],
        )
        .unwrap()
    }

    fn simplex2() -> LatticePolytope {
        LatticePolytope::from_vertices(
            2,
            vec![vec![bi(0), bi(0)], vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
        )
        .unwrap()
    }

    #[test]
    fn hvector_validation() {
        assert!(HVector::from_u64(&[2, 1]).is_err());
        assert!(HVector::new(vec![bi(1), bi(-1)]).is_err());
        let h = HVector::from_u64(&[1, 4, 0, 0]).unwrap();
        assert_eq!(h.coeffs_u64(), vec![1, 4]);
        assert_eq!(h.socle_degree(), 1);
        assert_eq!(h.to_string(), "(1, 4)");
        let one = HVector::from_u64(&[1, 0]).unwrap();
        assert_eq!(one.coeffs_u64(), vec![1]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), bi(10));
        assert_eq!(binomial(4, 0), bi(1));
        assert_eq!(binomial(3, 5), bi(0));
        assert_eq!(binomial(14, 7), bi(3432));
    }

    #[test]
    fn segment_h_stars() {
        assert_eq!(h_star(&segment(1)).unwrap().coeffs_u64(), vec![1]);
        assert_eq!(h_star(&segment(2)).unwrap().coeffs_u64(), vec![1, 1]);
    }

    #[test]
    fn unit_square_h_star_and_socle() {
        assert_eq!(h_star(&unit_square()).unwrap().coeffs_u64(), vec![1, 1]);
        assert_eq!(socle_degree_geometric(&unit_square()).unwrap(), 1);
        assert_eq!(socle_degree_geometric(&simplex2()).unwrap(), 0);
    }

    #[test]
    fn cross_plus_one_h_star() {
        let p1 = LatticePolytope::make_cross_plus(1).unwrap();
        assert_eq!(h_star(&p1).unwrap().coeffs_u64(), vec![1, 4, 7, 1]);
        assert_eq!(socle_degree_geometric(&p1).unwrap(), 3);
    }

    #[test]
    fn socle_matches_trailing_index() {
        for p in [segment(1), segment(2), unit_square(), simplex2()] {
            let h = h_star(&p).unwrap();
            assert_eq!(h.socle_degree(), socle_degree_geometric(&p).unwrap());
        }
    }

    #[test]
    fn profile_reciprocity_and_regeneration() {
        for p in [unit_square(), simplex2(), LatticePolytope::make_cross_plus(1).unwrap()] {
            let profile = EhrhartProfile::compute(&p, p.dim() + 1).unwrap();
            assert!(counts_match_hstar(&profile));
            assert!(reciprocity_check(&profile).unwrap());
        }
    }

    #[test]
    fn unit_square_interior_counts() {
        let profile = EhrhartProfile::compute(&unit_square(), 3).unwrap();
        let got: Vec<u64> = profile
            .interior_counts
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect();
        assert_eq!(got, vec![0, 1, 4]);
    }

    #[test]
    fn corrupted_h_star_fails_reciprocity() {
        let mut profile = EhrhartProfile::compute(&unit_square(), 3).unwrap();
        profile.hstar = HVector::from_u64(&[1, 2]).unwrap();
        assert!(!reciprocity_check(&profile).unwrap());
    }

    #[test]
    fn normalized_volume_via_finite_differences() {
        for p in [unit_square(), simplex2(), LatticePolytope::make_cross_plus(1).unwrap()] {
            let d = p.dim();
            let mut diffs: Vec<BigInt> = (0..=d as u64)
                .map(|n| p.count_points(n, false).unwrap())
                .collect();
            for _ in 0..d {
                diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
            }
            assert_eq!(diffs[0], h_star(&p).unwrap().sum());
        }
    }

    #[test]
    fn idp_probes() {
        assert!(idp_check(&unit_square(), 3).unwrap().values().all(|&b| b));
        assert!(idp_check(&segment(2), 2).unwrap().values().all(|&b| b));
        let p1 = LatticePolytope::make_cross_plus(1).unwrap();
        assert!(idp_check(&p1, 3).unwrap().values().all(|&b| b));
        assert!(idp_check(&p1, 1).is_err());
    }
}
