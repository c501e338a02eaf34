//! Linear-on-simplices maps into `R^n` with exact coordinates.

mod intersect;
mod spine_embedding;

pub use intersect::{
    intersect_simplices, pair_record, singular_set, verify_injective, IntersectionKind, PairRecord, SingularSet,
};
pub use spine_embedding::{
    choose_spine_barycenters, epsilon_neighborhood_embedding, segment_distance_sq, SpineEmbedding,
};

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<T>(pub Vec<T>);

impl<T: fmt::Debug> fmt::Debug for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl<T: Scalar> Point<T> {
    pub fn origin(n: usize) -> Self {
        Point(vec![T::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, o: &Point<T>) -> Point<T> {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn add(&self, o: &Point<T>) -> Point<T> {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn scale(&self, s: &T) -> Point<T> {
        Point(self.0.iter().map(|a| a.clone() * s.clone()).collect())
    }

    pub fn dot(&self, o: &Point<T>) -> T {
        self.0.iter().zip(&o.0).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn cross(&self, o: &Point<T>) -> Point<T> {
        assert!(self.dim() == 3 && o.dim() == 3, "cross product needs R^3");
        let (a, b) = (&self.0, &o.0);
        let c = |i: usize, j: usize| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
        Point(vec![c(1, 2), c(2, 0), c(0, 1)])
    }

    /// `Σ w_i p_i`.
    pub fn combination(points: &[&Point<T>], weights: &[T]) -> Point<T> {
        let n = points[0].dim();
        let mut acc = Point::origin(n);
        for (p, w) in points.iter().zip(weights) {
            acc = acc.add(&p.scale(w));
        }
        acc
    }

    pub fn centroid(points: &[&Point<T>]) -> Point<T> {
        let w = T::one() / T::from_int(points.len() as i64);
        Point::combination(points, &vec![w; points.len()])
    }
}

/// Reduces `m` to reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn affine_rank<T: Scalar>(points: &[&Point<T>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let mut m: Vec<Vec<T>> = points[1..].iter().map(|p| p.sub(points[0]).0).collect();
    rref(&mut m).len()
}

pub fn affinely_independent<T: Scalar>(points: &[&Point<T>]) -> bool {
    affine_rank(points) + 1 == points.len()
}

/// A map linear on each simplex, given by vertex images.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricMap<T> {
    pub domain: Complex,
    pub n: usize,
    pub points: BTreeMap<Vertex, Point<T>>,
}

impl<T: Scalar> GeometricMap<T> {
    pub fn new(domain: Complex, n: usize, points: BTreeMap<Vertex, Point<T>>) -> Result<Self> {
        for v in domain.vertices() {
            match points.get(&v) {
                None => return Err(Error::Parse(format!("vertex {v} has no coordinates"))),
                Some(p) if p.dim() != n => {
                    return Err(Error::Parse(format!("vertex {v} has {} coordinates, expected {n}", p.dim())))
                }
                _ => {}
            }
        }
        Ok(GeometricMap { domain, n, points })
    }

    pub fn point(&self, v: &Vertex) -> &Point<T> {
        &self.points[v]
    }

    pub fn images(&self, s: &Simplex) -> Vec<&Point<T>> {
        s.vertices().iter().map(|v| &self.points[v]).collect()
    }

    /// Image of a point given by barycentric coordinates in `s`.
    pub fn eval(&self, s: &Simplex, bary: &[T]) -> Point<T> {
        Point::combination(&self.images(s), bary)
    }

    /// Restriction to a subcomplex (dropping unused vertex images).
    pub fn restrict(&self, sub: &Complex) -> GeometricMap<T> {
        let points = sub.vertices().into_iter().map(|v| {
            let p = self.points[&v].clone();
            (v, p)
        });
        GeometricMap { domain: sub.clone(), n: self.n, points: points.collect() }
    }
}

/// A minimal set of vertices whose images are affinely dependent, if any
/// subset of at most `n + 1` vertices is.
pub fn general_position_witness<T: Scalar>(m: &GeometricMap<T>) -> Option<Vec<Vertex>> {
    let verts: Vec<Vertex> = m.domain.vertices();
    let k = verts.len().min(m.n + 1);
    let mut found = None;
    for_each_subset(verts.len(), k, &mut |idx| {
        let pts: Vec<&Point<T>> = idx.iter().map(|&i| &m.points[&verts[i]]).collect();
        if affinely_independent(&pts) {
            return true;
        }
        found = Some(idx.to_vec());
        false
    });
    let mut idx = found?;
    // shrink to a minimal dependent subset
    let mut i = 0;
    while i < idx.len() {
        let mut trial = idx.clone();
        trial.remove(i);
        let pts: Vec<&Point<T>> = trial.iter().map(|&j| &m.points[&verts[j]]).collect();
        if !trial.is_empty() && !affinely_independent(&pts) {
            idx = trial;
        } else {
            i += 1;
        }
    }
    Some(idx.into_iter().map(|i| verts[i].clone()).collect())
}

pub fn verify_general_position<T: Scalar>(m: &GeometricMap<T>) -> bool {
    general_position_witness(m).is_none()
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            let go_on = go(i + 1, n, k, cur, f);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

pub const SAMPLE_ATTEMPTS: usize = 1000;

/// Random general-position map. Vertices are placed one at a time in
/// sorted order; each coordinate is `p/q` with `1 <= q <= denom_bound` and
/// `0 <= p <= q`, redrawn until the points placed so far are in general
/// position.
pub fn sample_general_position_map<T: Scalar>(
    x: &Complex,
    n: usize,
    seed: u64,
    denom_bound: u32,
) -> Result<GeometricMap<T>> {
    if n == 0 {
        return Err(Error::Dimension { what: "ambient dimension must be positive", found: 0 });
    }
    let denom_bound = denom_bound.max(1) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed: Vec<(Vertex, Point<T>)> = Vec::new();
    for v in x.vertices() {
        let mut ok = false;
        for _ in 0..SAMPLE_ATTEMPTS {
            let p = Point(
                (0..n)
                    .map(|_| {
                        let q = rng.gen_range(1..=denom_bound);
                        T::from_ratio(rng.gen_range(0..=q), q)
                    })
                    .collect(),
            );
            if fits(&placed, &p, n) {
                placed.push((v.clone(), p));
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::BudgetExhausted {
                attempts: SAMPLE_ATTEMPTS,
                what: format!("general-position coordinates for vertex {v} (denominator bound {denom_bound})"),
            });
        }
    }
    let m = GeometricMap::new(x.clone(), n, placed.into_iter().collect())?;
    debug_assert!(verify_general_position(&m));
    Ok(m)
}

/// Whether adding `p` keeps every subset of size at most `n + 1` that
/// contains it affinely independent.
fn fits<T: Scalar>(placed: &[(Vertex, Point<T>)], p: &Point<T>, n: usize) -> bool {
    let k = placed.len().min(n);
    let mut ok = true;
    for_each_subset(placed.len(), k, &mut |idx| {
        let mut pts: Vec<&Point<T>> = idx.iter().map(|&i| &placed[i].1).collect();
        pts.push(p);
        ok = affinely_independent(&pts);
        ok
    });
    ok
}
