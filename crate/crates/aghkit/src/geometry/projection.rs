//! Fourier-Motzkin elimination and exact coordinate-projection bounds.
//!
//! A [`FmCascade`] stores, for each `k`, an irredundant system describing the
//! projection of the solution set to its first `k` coordinates. Eliminations
//! run once per system; bound queries substitute a prefix and read off an
//! exact rational interval for the next coordinate. Offsets scale linearly
//! under dilation, so a single cascade serves every dilate of a polytope.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::halfspace::{affine_rank, Halfspace, HalfspaceSystem};

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Precomputed eliminations of a halfspace system, one level per coordinate.
#[derive(Debug, Clone)]
pub struct FmCascade {
    /// `levels[k - 1]` lives in dimension `k` and describes the projection
    /// onto coordinates `1..=k`.
    levels: Vec<HalfspaceSystem>,
}

impl FmCascade {
    /// Builds the cascade for an arbitrary system. Redundancy after each
    /// elimination step is removed by exact feasibility tests.
    pub fn from_system(system: &HalfspaceSystem) -> Result<FmCascade> {
        Self::build(system, |sys, _| sys.remove_redundant())
    }

    /// Builds the cascade for the hull of a known vertex set. Redundancy is
    /// removed by the facet criterion: a valid inequality is irredundant for
    /// a full-dimensional polytope iff its tight vertices affinely span a
    /// hyperplane. This is much cheaper than feasibility tests and produces
    /// the same canonical system.
    pub(crate) fn from_system_with_vertices(
        system: &HalfspaceSystem,
        vertices: &[Vec<BigInt>],
    ) -> Result<FmCascade> {
        Self::build(system, |sys, k| {
            let projected: Vec<Vec<BigInt>> =
                vertices.iter().map(|v| v[..k].to_vec()).collect();
            facet_filter(&sys, &projected)
        })
    }

    fn build<F>(system: &HalfspaceSystem, reduce: F) -> Result<FmCascade>
    where
        F: Fn(HalfspaceSystem, usize) -> Result<HalfspaceSystem>,
    {
        let d = system.dimension();
        let mut levels = vec![reduce(system.clone(), d)?];
        for k in (1..d).rev() {
            let eliminated = eliminate_last(levels.last().unwrap())?;
            levels.push(reduce(eliminated, k)?);
        }
        levels.reverse();
        Ok(FmCascade { levels })
    }

    pub fn dimension(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &HalfspaceSystem {
        &self.levels[k - 1]
    }

    /// Exact interval of values `v` such that `(prefix, v)` extends to a
    /// point of the dilate `scale * P`. `None` means the prefix is infeasible.
    pub fn interval(
        &self,
        prefix: &[BigInt],
        scale: &BigInt,
    ) -> Result<Option<RationalInterval>> {
        let k = prefix.len();
        if k >= self.dimension() {
            return Err(Error::InvalidInput(format!(
                "prefix length {k} must be shorter than the dimension {}",
                self.dimension()
            )));
        }
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for h in self.level(k + 1).halfspaces() {
            let coeff = &h.normal()[k];
            let fixed: BigInt = h.normal()[..k].iter().zip(prefix).map(|(a, b)| a * b).sum();
            let rhs = h.offset() * scale - fixed;
            if coeff.is_zero() {
                if rhs.is_negative() {
                    return Ok(None);
                }
                continue;
            }
            let bound = BigRational::new(rhs, coeff.clone());
            if coeff.is_positive() {
                if hi.as_ref().is_none_or(|h| bound < *h) {
                    hi = Some(bound);
                }
            } else if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::NotApplicable(
                "projection interval is unbounded".into(),
            ));
        };
        if lo > hi {
            return Ok(None);
        }
        Ok(Some(RationalInterval { lo, hi }))
    }
}

/// One-shot projection bound: builds the cascade and queries it.
///
/// Callers that query repeatedly should hold on to a [`FmCascade`].
pub fn project_bounds(
    system: &HalfspaceSystem,
    prefix: &[BigInt],
) -> Result<Option<RationalInterval>> {
    FmCascade::from_system(system)?.interval(prefix, &BigInt::from(1))
}

/// Eliminates the last coordinate of `system` by combining each positive
/// row with each negative row; zero rows carry over.
fn eliminate_last(system: &HalfspaceSystem) -> Result<HalfspaceSystem> {
    let d = system.dimension();
    if d < 2 {
        return Err(Error::InvalidInput(
            "cannot eliminate the only coordinate".into(),
        ));
    }
    let last = d - 1;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out: BTreeSet<Halfspace> = BTreeSet::new();

    for h in system.halfspaces() {
        let c = &h.normal()[last];
        if c.is_zero() {
            out.insert(Halfspace::new(h.normal()[..last].to_vec(), h.offset().clone())?);
        } else if c.is_positive() {
            pos.push(h);
        } else {
            neg.push(h);
        }
    }

    for hp in &pos {
        let cp = &hp.normal()[last];
        for hn in &neg {
            let cn = &hn.normal()[last];
            // (-cn) * hp + cp * hn cancels the last coordinate; both
            // multipliers are positive so the inequality stays valid.
            let normal: Vec<BigInt> = hp.normal()[..last]
                .iter()
                .zip(&hn.normal()[..last])
                .map(|(a, b)| -(cn * a) + cp * b)
                .collect();
            let offset = -(cn * hp.offset()) + cp * hn.offset();
            if normal.iter().all(Zero::is_zero) {
                if offset.is_negative() {
                    return Err(Error::Internal(
                        "elimination exposed an infeasible constant row".into(),
                    ));
                }
                continue;
            }
            out.insert(Halfspace::new(normal, offset)?);
        }
    }

    HalfspaceSystem::new(last, out.into_iter().collect())
}

/// Keeps exactly the facet rows of a full-dimensional polytope given its
/// vertex set: a row survives iff its tight vertices have affine rank `dim`.
fn facet_filter(system: &HalfspaceSystem, vertices: &[Vec<BigInt>]) -> Result<HalfspaceSystem> {
    let dim = system.dimension();
    let mut kept = Vec::new();
    for h in system.halfspaces() {
        let mut tight = Vec::new();
        for v in vertices {
            let slack = h.slack(v);
            if slack.is_negative() {
                return Err(Error::Internal(
                    "projection row violated by a projected vertex".into(),
                ));
            }
            if slack.is_zero() {
                tight.push(v.clone());
            }
        }
        if affine_rank(&tight) == dim {
            kept.push(h.clone());
        }
    }
    HalfspaceSystem::new(dim, kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(bi(n), bi(d))
    }

    fn hs(normal: &[i64], offset: i64) -> Halfspace {
        Halfspace::new(normal.iter().map(|&v| bi(v)).collect(), bi(offset)).unwrap()
    }

    fn triangle() -> HalfspaceSystem {
        HalfspaceSystem::new(2, vec![hs(&[1, 1], 1), hs(&[-1, 0], 0), hs(&[0, -1], 0)]).unwrap()
    }

    #[test]
    fn triangle_bounds() {
        let sys = triangle();
        let iv = project_bounds(&sys, &[]).unwrap().unwrap();
        assert_eq!((iv.lo, iv.hi), (rat(0, 1), rat(1, 1)));

        let iv = project_bounds(&sys, &[bi(1)]).unwrap().unwrap();
        assert_eq!((iv.lo, iv.hi), (rat(0, 1), rat(0, 1)));

        assert_eq!(project_bounds(&sys, &[bi(2)]).unwrap(), None);
    }

    #[test]
    fn dilation_scales_offsets() {
        let square =
            HalfspaceSystem::new(2, vec![hs(&[1, 0], 1), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 0)])
                .unwrap();
        let cascade = FmCascade::from_system(&square).unwrap();
        let iv = cascade.interval(&[bi(2)], &bi(2)).unwrap().unwrap();
        assert_eq!((iv.lo, iv.hi), (rat(0, 1), rat(2, 1)));
        assert_eq!(cascade.interval(&[bi(3)], &bi(2)).unwrap(), None);
    }

    #[test]
    fn rational_endpoints_survive() {
        // x + 2y <= 3, x >= 0, y >= 0: for x = 0 the y-interval is [0, 3/2].
        let sys =
            HalfspaceSystem::new(2, vec![hs(&[1, 2], 3), hs(&[-1, 0], 0), hs(&[0, -1], 0)]).unwrap();
        let iv = project_bounds(&sys, &[bi(0)]).unwrap().unwrap();
        assert_eq!((iv.lo, iv.hi), (rat(0, 1), rat(3, 2)));
        // The x-interval alone is [0, 3].
        let iv = project_bounds(&sys, &[]).unwrap().unwrap();
        assert_eq!((iv.lo, iv.hi), (rat(0, 1), rat(3, 1)));
    }

    #[test]
    fn elimination_is_exact_on_a_box_scan() {
        // Diamond |x| + |y| <= 2: membership must match interval chaining.
        let sys = HalfspaceSystem::new(
            2,
            vec![hs(&[1, 1], 2), hs(&[1, -1], 2), hs(&[-1, 1], 2), hs(&[-1, -1], 2)],
        )
        .unwrap();
        let cascade = FmCascade::from_system(&sys).unwrap();
        let one = bi(1);
        for x in -3..=3 {
            for y in -3..=3 {
                let p = vec![bi(x), bi(y)];
                let inside = sys.contains(&p);
                let chained = match cascade.interval(&[], &one).unwrap() {
                    None => false,
                    Some(ix) => {
                        let fx = rat(x, 1);
                        if fx < ix.lo || fx > ix.hi {
                            false
                        } else {
                            match cascade.interval(&p[..1], &one).unwrap() {
                                None => false,
                                Some(iy) => {
                                    let fy = rat(y, 1);
                                    fy >= iy.lo && fy <= iy.hi
                                }
                            }
                        }
                    }
                };
                assert_eq!(inside, chained, "mismatch at ({x}, {y})");
            }
        }
    }

    #[test]
    fn unbounded_projection_is_reported() {
        let sys = HalfspaceSystem::new(2, vec![hs(&[0, 1], 1), hs(&[0, -1], 0)]).unwrap();
        assert!(matches!(
            project_bounds(&sys, &[]),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn vertex_assisted_cascade_matches_lp_cascade() {
        let verts: Vec<Vec<BigInt>> = [[0, 0], [1, 0], [0, 1]]
            .iter()
            .map(|p| p.iter().map(|&c| bi(c)).collect())
            .collect();
        let lp = FmCascade::from_system(&triangle()).unwrap();
        let vx = FmCascade::from_system_with_vertices(&triangle(), &verts).unwrap();
        for k in 1..=2 {
            assert_eq!(lp.level(k), vx.level(k));
        }
    }
}
