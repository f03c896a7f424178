//! Vertex-to-halfspace conversion by the double description method.
//!
//! A valid inequality `a . x <= b` for a point set `V` corresponds to a ray
//! `(a, b)` of the cone `{ (a, b) : b - a . v >= 0 for all v in V }`. For a
//! bounded full-dimensional polytope that cone is pointed and its extreme
//! rays are exactly the facet inequalities, so running double description
//! over one homogeneous constraint per vertex yields the irredundant
//! H-representation directly.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::halfspace::{affine_rank, Halfspace, HalfspaceSystem};

/// Computes the irredundant H-representation of `conv(vertices)`.
///
/// The vertex set must affinely span the ambient space; lower-dimensional
/// input is rejected rather than silently projected.
pub fn dd_convert(vertices: &[Vec<BigInt>], dimension: usize) -> Result<HalfspaceSystem> {
    if vertices.is_empty() {
        return Err(Error::InvalidInput("empty vertex list".into()));
    }
    if dimension == 0 {
        return Err(Error::InvalidInput("ambient dimension must be positive".into()));
    }
    for v in vertices {
        if v.len() != dimension {
            return Err(Error::InvalidInput(format!(
                "vertex has {} coordinates, expected {dimension}",
                v.len()
            )));
        }
    }
    let rank = affine_rank(vertices);
    if rank != dimension + 1 {
        return Err(Error::DimensionDeficiency {
            affine_rank: rank.saturating_sub(1),
            dimension,
        });
    }

    // Homogeneous constraint per vertex: (-v, 1) . (a, b) >= 0.
    let cone_dim = dimension + 1;
    let constraints: Vec<Vec<BigInt>> = vertices
        .iter()
        .map(|v| {
            v.iter()
                .map(|c| -c)
                .chain(std::iter::once(BigInt::one()))
                .collect()
        })
        .collect();

    let basis = independent_rows(&constraints, cone_dim)?;
    let mut rays = initial_rays(&constraints, &basis)?;

    let mut processed: Vec<usize> = basis.clone();
    for (idx, ray) in rays.iter_mut().enumerate() {
        debug_assert!(!ray.vector.iter().all(Zero::is_zero), "zero initial ray {idx}");
        for &c in &processed {
            if dot(&constraints[c], &ray.vector).is_zero() {
                ray.zero_set.insert(c);
            }
        }
    }

    for t in 0..constraints.len() {
        if basis.contains(&t) {
            continue;
        }
        insert_constraint(&constraints, &mut rays, t)?;
        processed.push(t);
    }

    let mut facets = Vec::new();
    for ray in &rays {
        let (normal, offset) = ray.vector.split_at(dimension);
        let offset = &offset[0];
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::Internal(
                "trivial inequality survived as an extreme ray of a bounded hull".into(),
            ));
        }
        facets.push(Halfspace::new(normal.to_vec(), offset.clone())?);
    }
    let system = HalfspaceSystem::new(dimension, facets)?;

    for v in vertices {
        for h in system.halfspaces() {
            if !h.contains(v) {
                return Err(Error::Internal(
                    "double description produced an inequality violated by an input vertex".into(),
                ));
            }
        }
    }
    Ok(system)
}

#[derive(Debug, Clone)]
struct Ray {
    vector: Vec<BigInt>,
    zero_set: BitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greedily selects `want` linearly independent rows.
fn independent_rows(rows: &[Vec<BigInt>], want: usize) -> Result<Vec<usize>> {
    let cols = want;
    let mut reduced: Vec<Vec<BigRational>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut work: Vec<BigRational> =
            row.iter().map(|c| BigRational::from(c.clone())).collect();
        for prev in &reduced {
            let lead = prev.iter().position(|c| !c.is_zero()).expect("nonzero row");
            if work[lead].is_zero() {
                continue;
            }
            let factor = &work[lead] / &prev[lead];
            for c in 0..cols {
                let sub = &factor * &prev[c];
                work[c] -= sub;
            }
        }
        if work.iter().any(|c| !c.is_zero()) {
            reduced.push(work);
            chosen.push(i);
            if chosen.len() == want {
                return Ok(chosen);
            }
        }
    }
    Err(Error::Internal(
        "constraint matrix lost rank after the affine-span check".into(),
    ))
}

/// Rays of the simplicial cone `{ y : M y >= 0 }`: the columns of `M^-1`,
/// scaled to primitive integer vectors by a positive factor.
fn initial_rays(constraints: &[Vec<BigInt>], basis: &[usize]) -> Result<Vec<Ray>> {
    let n = basis.len();
    let mut aug: Vec<Vec<BigRational>> = basis
        .iter()
        .enumerate()
        .map(|(r, &i)| {
            let mut row: Vec<BigRational> = constraints[i]
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect();
            row.extend((0..n).map(|c| {
                if c == r {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();

    // Gauss-Jordan on [M | I].
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular basis in double description".into()))?;
        aug.swap(col, pivot);
        let pv = aug[col][col].clone();
        for c in 0..2 * n {
            aug[col][c] /= &pv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in 0..2 * n {
                let sub = &factor * &aug[col][c];
                aug[r][c] -= sub;
            }
        }
    }

    let mut rays = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<BigRational> = (0..n).map(|r| aug[r][n + j].clone()).collect();
        rays.push(Ray {
            vector: primitive_from_rational(&col),
            zero_set: BitSet::new(),
        });
    }
    Ok(rays)
}

fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    primitive(ints)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

fn insert_constraint(constraints: &[Vec<BigInt>], rays: &mut Vec<Ray>, t: usize) -> Result<()> {
    let values: Vec<BigInt> = rays
        .iter()
        .map(|r| dot(&constraints[t], &r.vector))
        .collect();
    if values.iter().all(|v| !v.is_negative()) {
        for (ray, value) in rays.iter_mut().zip(&values) {
            if value.is_zero() {
                ray.zero_set.insert(t);
            }
        }
        return Ok(());
    }

    let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
    if neg.len() == rays.len() {
        return Err(Error::Internal(
            "vertex constraint eliminated the entire inequality cone".into(),
        ));
    }

    let mut created: Vec<Ray> = Vec::new();
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    for &p in &pos {
        for &q in &neg {
            let common = rays[p].zero_set.intersection(&rays[q].zero_set);
            let adjacent = rays.iter().enumerate().all(|(k, other)| {
                k == p || k == q || !other.zero_set.contains_all(&common)
            });
            if !adjacent {
                continue;
            }
            // Positive combination that lands on the hyperplane of t.
            let vector: Vec<BigInt> = rays[p]
                .vector
                .iter()
                .zip(&rays[q].vector)
                .map(|(rp, rq)| &values[p] * rq - &values[q] * rp)
                .collect();
            let vector = primitive(vector);
            debug_assert!(dot(&constraints[t], &vector).is_zero());
            if !seen.insert(vector.clone()) {
                continue;
            }
            let mut zero_set = common;
            zero_set.insert(t);
            created.push(Ray { vector, zero_set });
        }
    }

    let mut kept = Vec::with_capacity(pos.len() + created.len());
    for (i, mut ray) in rays.drain(..).enumerate() {
        if values[i].is_negative() {
            continue;
        }
        if values[i].is_zero() {
            ray.zero_set.insert(t);
        }
        kept.push(ray);
    }
    kept.extend(created);
    *rays = kept;
    Ok(())
}

/// Small growable bit set keyed by constraint index.
#[derive(Debug, Clone, Default)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new() -> Self {
        BitSet::default()
    }

    fn insert(&mut self, bit: usize) {
        let word = bit / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1 << (bit % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        let len = self.words.len().min(other.words.len());
        BitSet {
            words: (0..len).map(|i| self.words[i] & other.words[i]).collect(),
        }
    }

    fn contains_all(&self, other: &BitSet) -> bool {
        other.words.iter().enumerate().all(|(i, w)| {
            let own = self.words.get(i).copied().unwrap_or(0);
            own & w == *w
        })
    }
}
