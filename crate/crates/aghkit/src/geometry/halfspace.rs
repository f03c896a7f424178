//! Primitive integer halfspaces and finite systems of them.
//!
//! A [`Halfspace`] is the set `{ x : normal · x <= offset }` with an integer
//! normal that is not zero and is primitive: the gcd of all normal entries
//! together with the offset is 1. This canonical form makes halfspace
//! equality a plain component comparison, which the golden tests rely on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::simplex::{maximize, LpOutcome};

/// A closed halfspace `normal · x <= offset` with primitive integer data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    normal: Vec<BigInt>,
    offset: BigInt,
}

impl Halfspace {
    /// Builds a halfspace, reducing `(normal, offset)` to primitive form.
    pub fn new(normal: Vec<BigInt>, offset: BigInt) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "halfspace normal must not be the zero vector".into(),
            ));
        }
        let mut hs = Halfspace { normal, offset };
        hs.reduce();
        Ok(hs)
    }

    /// Clears denominators of a rational inequality `normal · x <= offset`
    /// and reduces to primitive form. The inequality direction is preserved.
    pub fn from_rational(normal: &[BigRational], offset: &BigRational) -> Result<Self> {
        let mut lcm = offset.denom().clone();
        for c in normal {
            lcm = lcm.lcm(c.denom());
        }
        let scale = |r: &BigRational| -> BigInt {
            let q = &lcm / r.denom();
            r.numer() * q
        };
        Halfspace::new(normal.iter().map(scale).collect(), scale(offset))
    }

    fn reduce(&mut self) {
        let mut g = self.offset.abs();
        for c in &self.normal {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.normal {
                *c /= &g;
            }
            self.offset /= &g;
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    /// Slack `offset - normal · point`; nonnegative iff the point satisfies
    /// the inequality, positive iff it satisfies it strictly.
    pub fn slack(&self, point: &[BigInt]) -> BigInt {
        debug_assert_eq!(point.len(), self.normal.len());
        let dot: BigInt = self.normal.iter().zip(point).map(|(a, b)| a * b).sum();
        &self.offset - dot
    }

    /// Slack against the dilate `scale * offset` of the halfspace.
    pub fn slack_scaled(&self, point: &[BigInt], scale: &BigInt) -> BigInt {
        let dot: BigInt = self.normal.iter().zip(point).map(|(a, b)| a * b).sum();
        &self.offset * scale - dot
    }

    pub fn contains(&self, point: &[BigInt]) -> bool {
        !self.slack(point).is_negative()
    }

    pub fn strictly_contains(&self, point: &[BigInt]) -> bool {
        self.slack(point).is_positive()
    }
}

/// A finite list of halfspaces in a common ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceSystem {
    dimension: usize,
    halfspaces: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new(dimension: usize, mut halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        for hs in &halfspaces {
            if hs.dim() != dimension {
                return Err(Error::InvalidInput(format!(
                    "halfspace normal has length {}, expected {}",
                    hs.dim(),
                    dimension
                )));
            }
        }
        halfspaces.sort();
        halfspaces.dedup();
        Ok(HalfspaceSystem { dimension, halfspaces })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    /// Membership in the dilate `scale * P` of the solution set.
    pub fn contains_scaled(&self, point: &[BigInt], scale: &BigInt, strict: bool) -> bool {
        self.halfspaces.iter().all(|h| {
            let s = h.slack_scaled(point, scale);
            if strict {
                s.is_positive()
            } else {
                !s.is_negative()
            }
        })
    }

    pub fn contains(&self, point: &[BigInt]) -> bool {
        self.contains_scaled(point, &BigInt::from(1), false)
    }

    /// True iff dropping the halfspace at `index` leaves the solution set
    /// unchanged. Decided exactly: the reversed strict inequality is feasible
    /// against the rest iff the halfspace cuts something off.
    pub fn is_redundant(&self, index: usize) -> Result<bool> {
        if index >= self.halfspaces.len() {
            return Err(Error::InvalidInput(format!(
                "halfspace index {index} out of range ({} halfspaces)",
                self.halfspaces.len()
            )));
        }
        let target = &self.halfspaces[index];
        let rest: Vec<&Halfspace> = self
            .halfspaces
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index)
            .map(|(_, h)| h)
            .collect();
        Ok(match maximize(target.normal(), &rest)? {
            // Empty rest-system: the whole set is empty either way.
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal(max) => max <= BigRational::from(target.offset().clone()),
        })
    }

    /// Removes redundant halfspaces until the system is irredundant.
    /// The solution set is preserved exactly.
    pub fn remove_redundant(&self) -> Result<HalfspaceSystem> {
        let mut kept = self.halfspaces.clone();
        let mut i = 0;
        while i < kept.len() {
            let probe = HalfspaceSystem {
                dimension: self.dimension,
                halfspaces: kept.clone(),
            };
            if probe.is_redundant(i)? {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        HalfspaceSystem::new(self.dimension, kept)
    }
}

/// Affine rank of a point set: the rank of the matrix of rows `(p, 1)`.
/// A set spans a `k`-dimensional affine subspace iff its affine rank is `k+1`.
pub(crate) fn affine_rank(points: &[Vec<BigInt>]) -> usize {
    let rows: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| BigRational::from(c.clone()))
                .chain(std::iter::once(BigRational::from(BigInt::from(1))))
                .collect()
        })
        .collect();
    rational_rank(rows)
}

/// Rank of a rational matrix by fraction-free-ish Gaussian elimination.
pub(crate) fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut col = 0;
    while col < cols && rank < rows.len() {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let pv = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pv;
            for c in col..cols {
                let sub = &factor * &rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn hs(normal: &[i64], offset: i64) -> Halfspace {
        Halfspace::new(normal.iter().map(|&v| bi(v)).collect(), bi(offset)).unwrap()
    }

    #[test]
    fn normalization_reaches_primitive_form() {
        assert_eq!(hs(&[2, 4], 6), hs(&[1, 2], 3));
        assert_eq!(hs(&[-2, 0], 4), hs(&[-1, 0], 2));
        // gcd(2, 3) = 1: nothing to divide out.
        let h = hs(&[2], 3);
        assert_eq!(h.normal(), &[bi(2)]);
        assert_eq!(h.offset(), &bi(3));
    }

    #[test]
    fn zero_normal_is_rejected() {
        assert!(Halfspace::new(vec![bi(0), bi(0)], bi(1)).is_err());
    }

    #[test]
    fn slack_and_membership() {
        let h = hs(&[1, 1], 1); // x + y <= 1
        assert!(h.contains(&[bi(0), bi(1)]));
        assert!(!h.strictly_contains(&[bi(0), bi(1)]));
        assert!(h.strictly_contains(&[bi(0), bi(0)]));
        assert!(!h.contains(&[bi(1), bi(1)]));
        assert_eq!(h.slack_scaled(&[bi(2), bi(0)], &bi(2)), bi(0));
    }

    #[test]
    fn redundancy_of_parallel_and_duplicate_rows() {
        // d = 1: {x <= 1, x <= 2}; the second is implied.
        let sys = HalfspaceSystem::new(1, vec![hs(&[1], 1), hs(&[1], 2)]).unwrap();
        let loose = sys.halfspaces().iter().position(|h| h.offset() == &bi(2)).unwrap();
        assert!(sys.is_redundant(loose).unwrap());
        assert!(!sys.is_redundant(1 - loose).unwrap());

        // {x <= 1, x >= 0}: both facets are needed.
        let seg = HalfspaceSystem::new(1, vec![hs(&[1], 1), hs(&[-1], 0)]).unwrap();
        assert!(!seg.is_redundant(0).unwrap());
        assert!(!seg.is_redundant(1).unwrap());
    }

    #[test]
    fn duplicated_facet_is_dropped_by_construction() {
        // A duplicated simplex facet normalizes to the same primitive form.
        let sys = HalfspaceSystem::new(
            2,
            vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1), hs(&[2, 2], 2)],
        )
        .unwrap();
        assert_eq!(sys.len(), 3);
        let red = sys.remove_redundant().unwrap();
        assert_eq!(red.len(), 3);
    }

    #[test]
    fn remove_redundant_keeps_solution_set() {
        // Unit square plus two implied rows.
        let square = vec![hs(&[1, 0], 1), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 0)];
        let mut padded = square.clone();
        padded.push(hs(&[1, 1], 3));
        padded.push(hs(&[1, -1], 1));
        let sys = HalfspaceSystem::new(2, padded).unwrap();
        let red = sys.remove_redundant().unwrap();
        let expect = HalfspaceSystem::new(2, square).unwrap();
        assert_eq!(red, expect);
    }

    #[test]
    fn affine_rank_detects_degeneracy() {
        let pts = |vs: &[[i64; 2]]| -> Vec<Vec<BigInt>> {
            vs.iter().map(|p| p.iter().map(|&c| bi(c)).collect()).collect()
        };
        assert_eq!(affine_rank(&pts(&[[0, 0], [1, 0], [0, 1]])), 3);
        assert_eq!(affine_rank(&pts(&[[0, 0], [1, 1], [2, 2]])), 2);
        assert_eq!(affine_rank(&pts(&[[5, 7]])), 1);
    }
}
