//! Lattice polytopes: construction (including the named families), exact
//! membership, and pruned enumeration of lattice points in dilates.
//!
//! A [`LatticePolytope`] eagerly computes its irredundant H-representation
//! and a Fourier-Motzkin cascade at construction; both are immutable
//! afterwards, so values can be shared freely across threads. Dilation never
//! scales vertices: the dilate `n * P` is represented by scaling halfspace
//! offsets, so one cascade serves every `n`. Enumeration walks coordinates
//! `1..=d` in order, reading exact integer bounds off the cascade level for
//! each prefix, and batches the innermost coordinate as an interval length.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dd_convert, FmCascade, Halfspace, HalfspaceSystem};
use crate::poset::Poset;

/// Coefficient magnitude cap for the fixed-width enumeration kernel.
/// Cascades exceeding it fall back to an explicit overflow error rather
/// than risking silent wraparound.
const INT_LIMIT: i64 = 1 << 40;

/// Dilation factor cap; keeps every intermediate product inside `i128`.
const SCALE_LIMIT: u64 = 1 << 20;

/// A full-dimensional polytope with integer vertices.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<BigInt>>,
    hrep: HalfspaceSystem,
    cascade: FmCascade,
    int_cascade: Option<IntCascade>,
}

impl LatticePolytope {
    /// Builds the convex hull of the given integer points. The points must
    /// affinely span the ambient space.
    pub fn from_vertices(dim: usize, vertices: Vec<Vec<BigInt>>) -> Result<LatticePolytope> {
        let hrep = dd_convert(&vertices, dim)?;
        Self::assemble(dim, vertices, hrep)
    }

    /// Builds a polytope from a known vertex set and a halfspace system that
    /// is checked against the vertices, then reduced to facets.
    fn from_parts(
        dim: usize,
        vertices: Vec<Vec<BigInt>>,
        hrep: HalfspaceSystem,
    ) -> Result<LatticePolytope> {
        for v in &vertices {
            if !hrep.contains(v) {
                return Err(Error::Internal(
                    "constructed halfspace system excludes one of its vertices".into(),
                ));
            }
        }
        Self::assemble(dim, vertices, hrep)
    }

    fn assemble(
        dim: usize,
        vertices: Vec<Vec<BigInt>>,
        hrep: HalfspaceSystem,
    ) -> Result<LatticePolytope> {
        let cascade = FmCascade::from_system_with_vertices(&hrep, &vertices)?;
        // The cascade's top level is the irredundant facet system.
        let hrep = cascade.level(dim).clone();
        let int_cascade = IntCascade::try_from_cascade(&cascade);
        Ok(LatticePolytope {
            dim,
            vertices,
            hrep,
            cascade,
            int_cascade,
        })
    }

    /// The cross-polytope-plus-vertex family: for `e >= 1`, the hull of
    /// `{±e_1, ..., ±e_d, e_1 + ... + e_{d-1} + 2 e_d}` in dimension
    /// `d = 2e + 1`.
    pub fn make_cross_plus(e: usize) -> Result<LatticePolytope> {
        if e < 1 {
            return Err(Error::InvalidInput("the cross family needs e >= 1".into()));
        }
        let d = 2 * e + 1;
        let mut vertices = Vec::with_capacity(2 * d + 1);
        for i in 0..d {
            for sign in [1i64, -1] {
                let mut v = vec![BigInt::zero(); d];
                v[i] = BigInt::from(sign);
                vertices.push(v);
            }
        }
        let mut apex = vec![BigInt::one(); d];
        apex[d - 1] = BigInt::from(2);
        vertices.push(apex);
        LatticePolytope::from_vertices(d, vertices)
    }

    /// The order polytope of a poset: points `a` with `0 <= a_i <= 1` and
    /// `a_i >= a_j` whenever `x_i <= x_j`. Its H-representation comes
    /// straight from that definition (one inequality per cover relation plus
    /// the box bounds); its vertices are the indicator vectors of down-sets.
    pub fn order_polytope(poset: &Poset) -> Result<LatticePolytope> {
        let n = poset.len();
        let mut halfspaces = Vec::new();
        for i in 0..n {
            let mut up = vec![BigInt::zero(); n];
            up[i] = BigInt::one();
            halfspaces.push(Halfspace::new(up, BigInt::one())?);
            let mut down = vec![BigInt::zero(); n];
            down[i] = -BigInt::one();
            halfspaces.push(Halfspace::new(down, BigInt::zero())?);
        }
        for (i, j) in poset.covers() {
            // a_i >= a_j, decreasing along the order.
            let mut normal = vec![BigInt::zero(); n];
            normal[i] = -BigInt::one();
            normal[j] = BigInt::one();
            halfspaces.push(Halfspace::new(normal, BigInt::zero())?);
        }
        let raw = HalfspaceSystem::new(n, halfspaces)?;

        let vertices: Vec<Vec<BigInt>> = poset
            .down_sets()?
            .into_iter()
            .map(|mask| {
                (0..n)
                    .map(|i| {
                        if mask & (1 << i) != 0 {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();

        LatticePolytope::from_parts(n, vertices, raw)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn hrep(&self) -> &HalfspaceSystem {
        &self.hrep
    }

    pub fn cascade(&self) -> &FmCascade {
        &self.cascade
    }

    /// Exact membership of an integer point in `n * P` (strictly inside when
    /// `interior` is set).
    pub fn contains_scaled(&self, point: &[BigInt], n: u64, interior: bool) -> bool {
        self.hrep.contains_scaled(point, &BigInt::from(n), interior)
    }

    /// Number of lattice points of `n * P`, or of `n * int(P)` when
    /// `interior_only` is set.
    pub fn count_points(&self, n: u64, interior_only: bool) -> Result<BigInt> {
        if interior_only && n == 0 {
            return Ok(BigInt::zero());
        }
        let kernel = self.kernel(n)?;
        let total = kernel.count(interior_only)?;
        Ok(BigInt::from(total))
    }

    /// The lattice points of `n * P`, in lexicographic coordinate order.
    pub fn lattice_points(&self, n: u64) -> Result<Vec<Vec<i64>>> {
        let kernel = self.kernel(n)?;
        kernel.collect_points()
    }

    fn kernel(&self, n: u64) -> Result<EnumerationKernel<'_>> {
        if n > SCALE_LIMIT {
            return Err(Error::Overflow(format!(
                "dilation factor {n} exceeds the enumeration cap {SCALE_LIMIT}"
            )));
        }
        let cascade = self.int_cascade.as_ref().ok_or_else(|| {
            Error::Overflow("halfspace data does not fit the enumeration kernel".into())
        })?;
        Ok(EnumerationKernel {
            cascade,
            scale: n as i64,
        })
    }

    /// Reads the polytope text format: a `dim d` header followed by one
    /// vertex per line as `d` space-separated integers.
    pub fn parse(text: &str) -> Result<LatticePolytope> {
        let mut dim: Option<usize> = None;
        let mut vertices: Vec<Vec<BigInt>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match dim {
                None => {
                    let rest = line.strip_prefix("dim").ok_or(Error::Parse {
                        line: lineno,
                        message: format!("expected `dim d` header, found {line:?}"),
                    })?;
                    let d: usize = rest.trim().parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("cannot read dimension from {line:?}"),
                    })?;
                    dim = Some(d);
                }
                Some(d) => {
                    let coords: Vec<BigInt> = line
                        .split_whitespace()
                        .map(|tok| {
                            tok.parse::<BigInt>().map_err(|_| Error::Parse {
                                line: lineno,
                                message: format!("cannot read integer coordinate {tok:?}"),
                            })
                        })
                        .collect::<Result<_>>()?;
                    if coords.len() != d {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!(
                                "vertex has {} coordinates, expected {d}",
                                coords.len()
                            ),
                        });
                    }
                    vertices.push(coords);
                }
            }
        }
        let dim = dim.ok_or(Error::Parse {
            line: 1,
            message: "missing `dim d` header".into(),
        })?;
        LatticePolytope::from_vertices(dim, vertices)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for v in &self.vertices {
            let words: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Fixed-width copy of a cascade for the enumeration hot path.
#[derive(Debug, Clone)]
struct IntCascade {
    /// `levels[k]` are the rows of the projection to coordinates `1..=k+1`;
    /// each row is `(coeffs, offset)` with `coeffs.len() == k + 1`.
    levels: Vec<Vec<(Vec<i64>, i64)>>,
}

impl IntCascade {
    fn try_from_cascade(cascade: &FmCascade) -> Option<IntCascade> {
        let to_i64 = |v: &BigInt| -> Option<i64> {
            let x = v.to_i64()?;
            (x.abs() <= INT_LIMIT).then_some(x)
        };
        let mut levels = Vec::with_capacity(cascade.dimension());
        for k in 1..=cascade.dimension() {
            let mut rows = Vec::new();
            for h in cascade.level(k).halfspaces() {
                let coeffs: Option<Vec<i64>> = h.normal().iter().map(to_i64).collect();
                rows.push((coeffs?, to_i64(h.offset())?));
            }
            levels.push(rows);
        }
        Some(IntCascade { levels })
    }

    /// Integer bounds for the coordinate after `prefix` in the dilate by
    /// `scale`. `None` means the prefix has no feasible extension.
    fn bounds(&self, prefix: &[i64], scale: i64, strict: bool) -> Result<Option<(i64, i64)>> {
        let depth = prefix.len();
        let mut lo = i128::MIN;
        let mut hi = i128::MAX;
        for (coeffs, offset) in &self.levels[depth] {
            let fixed: i128 = coeffs[..depth]
                .iter()
                .zip(prefix)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            let rhs = *offset as i128 * scale as i128 - fixed;
            let c = coeffs[depth];
            if c == 0 {
                let ok = if strict { rhs > 0 } else { rhs >= 0 };
                if !ok {
                    return Ok(None);
                }
            } else if c > 0 {
                let q = c as i128;
                let bound = if strict {
                    (rhs - 1).div_euclid(q)
                } else {
                    rhs.div_euclid(q)
                };
                hi = hi.min(bound);
            } else {
                // For c < 0 the row reads x >= -rhs / q with q = -c > 0.
                let q = (-c) as i128;
                let bound = if strict {
                    (-rhs).div_euclid(q) + 1
                } else {
                    ceil_div(-rhs, q)
                };
                lo = lo.max(bound);
            }
        }
        if lo > hi {
            return Ok(None);
        }
        if lo == i128::MIN || hi == i128::MAX {
            return Err(Error::Internal(
                "projection interval of a polytope came out unbounded".into(),
            ));
        }
        if lo < i64::MIN as i128 || hi > i64::MAX as i128 {
            return Err(Error::Overflow(
                "enumeration bounds exceed the fixed-width kernel".into(),
            ));
        }
        Ok(Some((lo as i64, hi as i64)))
    }
}

fn ceil_div(a: i128, q: i128) -> i128 {
    debug_assert!(q > 0);
    -((-a).div_euclid(q))
}

struct EnumerationKernel<'a> {
    cascade: &'a IntCascade,
    scale: i64,
}

impl EnumerationKernel<'_> {
    fn count(&self, strict: bool) -> Result<u128> {
        let d = self.cascade.levels.len();
        let Some((lo, hi)) = self.cascade.bounds(&[], self.scale, strict)? else {
            return Ok(0);
        };
        if d == 1 {
            return Ok((hi - lo + 1) as u128);
        }
        // Deterministic regardless of the split: per-branch counts are
        // summed over a fixed index range.
        let partials: Result<Vec<u128>> = (lo..=hi)
            .into_par_iter()
            .map(|v| {
                let mut prefix = vec![v];
                self.count_rec(&mut prefix, strict)
            })
            .collect();
        let mut total: u128 = 0;
        for p in partials? {
            total = total
                .checked_add(p)
                .ok_or_else(|| Error::Overflow("lattice point count exceeds u128".into()))?;
        }
        Ok(total)
    }

    fn count_rec(&self, prefix: &mut Vec<i64>, strict: bool) -> Result<u128> {
        let d = self.cascade.levels.len();
        let Some((lo, hi)) = self.cascade.bounds(prefix, self.scale, strict)? else {
            return Ok(0);
        };
        if prefix.len() + 1 == d {
            return Ok((hi - lo + 1) as u128);
        }
        let mut total: u128 = 0;
        for v in lo..=hi {
            prefix.push(v);
            let sub = self.count_rec(prefix, strict)?;
            prefix.pop();
            total = total
                .checked_add(sub)
                .ok_or_else(|| Error::Overflow("lattice point count exceeds u128".into()))?;
        }
        Ok(total)
    }

    fn collect_points(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect_rec(&mut prefix, &mut out)?;
        Ok(out)
    }

    fn collect_rec(&self, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) -> Result<()> {
        let d = self.cascade.levels.len();
        let Some((lo, hi)) = self.cascade.bounds(prefix, self.scale, false)? else {
            return Ok(());
        };
        for v in lo..=hi {
            prefix.push(v);
            if prefix.len() == d {
                out.push(prefix.clone());
            } else {
                self.collect_rec(prefix, out)?;
            }
            prefix.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn unit_square() -> LatticePolytope {
        let vs = vec![
            vec![bi(0), bi(0)],
            vec![bi(1), bi(0)],
            vec![bi(0), bi(1)],
            vec![bi(1), bi(1)],
        ];
        LatticePolytope::from_vertices(2, vs).unwrap()
    }

    /// Brute-force reference count over the scaled bounding box.
    fn box_scan(p: &LatticePolytope, n: u64, interior: bool) -> u64 {
        let d = p.dim();
        let scale = BigInt::from(n);
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in p.vertices() {
            for (i, c) in v.iter().enumerate() {
                let c = c.to_i64().unwrap() * n as i64;
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        let mut count = 0;
        let mut point = vec![0i64; d];
        fn rec(
            p: &LatticePolytope,
            scale: &BigInt,
            interior: bool,
            lo: &[i64],
            hi: &[i64],
            point: &mut Vec<i64>,
            depth: usize,
            count: &mut u64,
        ) {
            if depth == lo.len() {
                let big: Vec<BigInt> = point.iter().map(|&c| BigInt::from(c)).collect();
                if p.hrep().contains_scaled(&big, scale, interior) {
                    *count += 1;
                }
                return;
            }
            for v in lo[depth]..=hi[depth] {
                point[depth] = v;
                rec(p, scale, interior, lo, hi, point, depth + 1, count);
            }
        }
        rec(p, &scale, interior, &lo, &hi, &mut point, 0, &mut count);
        count
    }

    #[test]
    fn unit_square_counts() {
        let sq = unit_square();
        assert_eq!(sq.count_points(2, false).unwrap(), bi(9));
        assert_eq!(sq.count_points(0, false).unwrap(), bi(1));
        assert_eq!(sq.count_points(1, true).unwrap(), bi(0));
        assert_eq!(sq.count_points(2, true).unwrap(), bi(1));
        assert_eq!(sq.count_points(3, true).unwrap(), bi(4));
    }

    #[test]
    fn cross_plus_family_basics() {
        let p1 = LatticePolytope::make_cross_plus(1).unwrap();
        assert_eq!(p1.dim(), 3);
        assert_eq!(p1.vertices().len(), 7);
        assert!(p1
            .vertices()
            .iter()
            .any(|v| v == &vec![bi(1), bi(1), bi(2)]));
        assert_eq!(p1.count_points(0, false).unwrap(), bi(1));
        assert_eq!(p1.count_points(1, false).unwrap(), bi(8));
        assert_eq!(p1.count_points(1, true).unwrap(), bi(1));
        assert!(LatticePolytope::make_cross_plus(0).is_err());

        let p2 = LatticePolytope::make_cross_plus(2).unwrap();
        assert_eq!(p2.dim(), 5);
        assert_eq!(p2.vertices().len(), 11);
        assert!(p2
            .vertices()
            .iter()
            .any(|v| v == &vec![bi(1), bi(1), bi(1), bi(1), bi(2)]));
    }

    #[test]
    fn counts_match_box_scan_oracle() {
        let polys = vec![
            unit_square(),
            LatticePolytope::make_cross_plus(1).unwrap(),
            LatticePolytope::from_vertices(
                2,
                vec![vec![bi(0), bi(0)], vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
            )
            .unwrap(),
            LatticePolytope::from_vertices(1, vec![vec![bi(0)], vec![bi(2)]]).unwrap(),
        ];
        for p in &polys {
            for n in 0..=4u64 {
                for interior in [false, true] {
                    if interior && n == 0 {
                        continue;
                    }
                    assert_eq!(
                        p.count_points(n, interior).unwrap(),
                        BigInt::from(box_scan(p, n, interior)),
                        "dim {} n {n} interior {interior}",
                        p.dim()
                    );
                }
            }
        }
    }

    #[test]
    fn counts_are_monotone_and_dilation_consistent() {
        let p = LatticePolytope::make_cross_plus(1).unwrap();
        let mut last = BigInt::zero();
        for n in 0..=4u64 {
            let c = p.count_points(n, false).unwrap();
            assert!(c >= last);
            let inner = p.count_points(n.max(1), true).unwrap();
            assert!(inner <= p.count_points(n.max(1), false).unwrap());
            last = c;
        }
        // Scaling vertices by n and counting at dilate 1 gives the same.
        for n in 1..=3u64 {
            let scaled: Vec<Vec<BigInt>> = p
                .vertices()
                .iter()
                .map(|v| v.iter().map(|c| c * BigInt::from(n)).collect())
                .collect();
            let np = LatticePolytope::from_vertices(p.dim(), scaled).unwrap();
            assert_eq!(
                np.count_points(1, false).unwrap(),
                p.count_points(n, false).unwrap()
            );
        }
    }

    #[test]
    fn order_polytope_of_small_posets() {
        let antichain = Poset::antichain(2).unwrap();
        let square = LatticePolytope::order_polytope(&antichain).unwrap();
        assert_eq!(square.dim(), 2);
        assert_eq!(square.vertices().len(), 4);

        let chain = Poset::chain(2).unwrap();
        let triangle = LatticePolytope::order_polytope(&chain).unwrap();
        assert_eq!(triangle.vertices().len(), 3);
        let expect = dd_convert(
            &[
                vec![bi(0), bi(0)],
                vec![bi(1), bi(0)],
                vec![bi(1), bi(1)],
            ],
            2,
        )
        .unwrap();
        assert_eq!(triangle.hrep(), &expect);

        let paper = Poset::from_covers(4, &[(1, 3), (2, 3), (2, 4)]).unwrap();
        let op = LatticePolytope::order_polytope(&paper).unwrap();
        assert_eq!(op.dim(), 4);
        assert_eq!(op.vertices().len(), 8);
    }

    #[test]
    fn order_polytope_vertex_count_is_the_ideal_count() {
        for (poset, ideals) in [
            (Poset::chain(4).unwrap(), 5u64),
            (Poset::antichain(3).unwrap(), 8),
            (Poset::family_pm(3).unwrap(), Poset::family_pm(3).unwrap().down_sets().unwrap().len() as u64),
        ] {
            let op = LatticePolytope::order_polytope(&poset).unwrap();
            assert_eq!(op.vertices().len() as u64, ideals);
        }
    }

    #[test]
    fn lattice_point_listing_matches_count() {
        let p = LatticePolytope::make_cross_plus(1).unwrap();
        for n in 0..=2u64 {
            let pts = p.lattice_points(n).unwrap();
            assert_eq!(BigInt::from(pts.len()), p.count_points(n, false).unwrap());
            for pt in &pts {
                let big: Vec<BigInt> = pt.iter().map(|&c| bi(c)).collect();
                assert!(p.contains_scaled(&big, n, false));
            }
        }
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let p1 = LatticePolytope::make_cross_plus(1).unwrap();
        let text = p1.to_text();
        let back = LatticePolytope::parse(&text).unwrap();
        assert_eq!(back.hrep(), p1.hrep());

        match LatticePolytope::parse("dim 2\n1 2 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match LatticePolytope::parse("dim 2\n0 0\n1 1\n") {
            Err(Error::DimensionDeficiency { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
