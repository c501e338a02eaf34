//! Exact intersection of simplex images and the singular set.
//!
//! `f(σ) ∩ f(τ)` is the image of the polytope of barycentric pairs
//! `(λ, μ) >= 0` with `Σλ = Σμ = 1` and `Σ λ_i a_i = Σ μ_j b_j`. Its vertices
//! are the nonnegative basic solutions of that system, found by trying every
//! column basis; simplices are small, so this stays cheap and needs no
//! case analysis for degenerate configurations.

use rayon::prelude::*;

use super::{affine_rank, for_each_subset, general_position_witness, rref, GeometricMap, Point};
use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Barycentric coordinates of one vertex of the intersection polytope, in
/// the first and the second simplex.
pub type Preimage<T> = (Vec<T>, Vec<T>);

fn bbox<T: Scalar>(pts: &[&Point<T>]) -> (Vec<T>, Vec<T>) {
    let n = pts[0].dim();
    let mut lo = pts[0].0.clone();
    let mut hi = pts[0].0.clone();
    for p in &pts[1..] {
        for k in 0..n {
            if p.0[k] < lo[k] {
                lo[k] = p.0[k].clone();
            }
            if p.0[k] > hi[k] {
                hi[k] = p.0[k].clone();
            }
        }
    }
    (lo, hi)
}

fn boxes_meet<T: Scalar>(a: &(Vec<T>, Vec<T>), b: &(Vec<T>, Vec<T>)) -> bool {
    (0..a.0.len()).all(|k| a.0[k] <= b.1[k] && b.0[k] <= a.1[k])
}

/// Vertices of the intersection polytope of the images of two simplices.
pub fn intersect_simplices<T: Scalar>(a: &[&Point<T>], b: &[&Point<T>]) -> Vec<Preimage<T>> {
    if !boxes_meet(&bbox(a), &bbox(b)) {
        return Vec::new();
    }
    let (p, q) = (a.len(), b.len());
    let nvars = p + q;
    let n = a[0].dim();
    let mut sys: Vec<Vec<T>> = Vec::with_capacity(n + 2);
    for k in 0..n {
        let mut row: Vec<T> = a.iter().map(|x| x.0[k].clone()).collect();
        row.extend(b.iter().map(|x| -x.0[k].clone()));
        row.push(T::zero());
        sys.push(row);
    }
    let mut sum_a = vec![T::zero(); nvars + 1];
    let mut sum_b = vec![T::zero(); nvars + 1];
    for v in sum_a.iter_mut().take(p) {
        *v = T::one();
    }
    for v in sum_b.iter_mut().skip(p).take(q) {
        *v = T::one();
    }
    sum_a[nvars] = T::one();
    sum_b[nvars] = T::one();
    sys.push(sum_a);
    sys.push(sum_b);

    let pivots = rref(&mut sys);
    if pivots.last() == Some(&nvars) {
        return Vec::new();
    }
    let r = pivots.len();
    sys.truncate(r);

    let mut out: Vec<Vec<T>> = Vec::new();
    for_each_subset(nvars, r, &mut |cols| {
        let mut m: Vec<Vec<T>> =
            sys.iter().map(|row| cols.iter().map(|&c| row[c].clone()).chain([row[nvars].clone()]).collect()).collect();
        let piv = rref(&mut m);
        if piv.len() == r && piv.iter().all(|&c| c < r) {
            let mut sol = vec![T::zero(); nvars];
            for (i, &c) in cols.iter().enumerate() {
                sol[c] = m[i][r].clone();
            }
            if sol.iter().all(|x| !x.is_negative()) && !out.contains(&sol) {
                out.push(sol);
            }
        }
        true
    });
    out.into_iter()
        .map(|mut s| {
            let mu = s.split_off(p);
            (s, mu)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntersectionKind<T> {
    Empty,
    Point(Point<T>),
    Segment(Point<T>, Point<T>),
    Polytope { dim: usize, vertices: Vec<Point<T>> },
}

impl<T> IntersectionKind<T> {
    pub fn dim(&self) -> isize {
        match self {
            IntersectionKind::Empty => -1,
            IntersectionKind::Point(_) => 0,
            IntersectionKind::Segment(..) => 1,
            IntersectionKind::Polytope { dim, .. } => *dim as isize,
        }
    }
}

/// Intersection of the images of two simplices whose intersection is not
/// just the image of their common face.
#[derive(Clone, Debug)]
pub struct PairRecord<T> {
    pub a: Simplex,
    pub b: Simplex,
    pub kind: IntersectionKind<T>,
    /// Preimages of the polytope vertices; for a segment, of its two
    /// endpoints (in order).
    pub preimages: Vec<Preimage<T>>,
}

impl<T: Scalar> PairRecord<T> {
    /// The record seen from the other simplex.
    pub fn flipped(&self) -> PairRecord<T> {
        PairRecord {
            a: self.b.clone(),
            b: self.a.clone(),
            kind: self.kind.clone(),
            preimages: self.preimages.iter().map(|(l, m)| (m.clone(), l.clone())).collect(),
        }
    }
}

/// Whether every intersection vertex is a point of the common face with the
/// same coordinates on both sides.
fn only_common_face<T: Scalar>(a: &Simplex, b: &Simplex, verts: &[Preimage<T>]) -> bool {
    verts.iter().all(|(lam, mu)| {
        let a_ok = a.vertices().iter().zip(lam).all(|(v, l)| match b.position(v) {
            None => l.is_zero(),
            Some(j) => *l == mu[j],
        });
        a_ok && b.vertices().iter().zip(mu).all(|(v, m)| a.contains(v) || m.is_zero())
    })
}

/// `None` when the images meet exactly in the image of the common face.
pub fn pair_record<T: Scalar>(m: &GeometricMap<T>, a: &Simplex, b: &Simplex) -> Option<PairRecord<T>> {
    let (pa, pb) = (m.images(a), m.images(b));
    let verts = intersect_simplices(&pa, &pb);
    if only_common_face(a, b, &verts) {
        return None;
    }
    let images: Vec<Point<T>> = verts.iter().map(|(l, _)| Point::combination(&pa, l)).collect();
    let refs: Vec<&Point<T>> = images.iter().collect();
    let dim = affine_rank(&refs);
    let (kind, preimages) = match dim {
        0 => (IntersectionKind::Point(images[0].clone()), vec![verts[0].clone()]),
        1 => {
            let dir = images.iter().find(|p| **p != images[0]).expect("two points").sub(&images[0]);
            let t: Vec<T> = images.iter().map(|p| p.sub(&images[0]).dot(&dir)).collect();
            let lo = (0..t.len()).min_by(|&i, &j| t[i].partial_cmp(&t[j]).unwrap()).unwrap();
            let hi = (0..t.len()).max_by(|&i, &j| t[i].partial_cmp(&t[j]).unwrap()).unwrap();
            (
                IntersectionKind::Segment(images[lo].clone(), images[hi].clone()),
                vec![verts[lo].clone(), verts[hi].clone()],
            )
        }
        d => (IntersectionKind::Polytope { dim: d, vertices: images }, verts),
    };
    Some(PairRecord { a: a.clone(), b: b.clone(), kind, preimages })
}

#[derive(Clone, Debug)]
pub struct SingularSet<T> {
    pub n: usize,
    /// Records for pairs of maximal simplices.
    pub records: Vec<PairRecord<T>>,
    /// Number of simplex pairs whose dimension bound was checked.
    pub pairs_checked: usize,
}

impl<T: Scalar> SingularSet<T> {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_dim(&self) -> isize {
        self.records.iter().map(|r| r.kind.dim()).max().unwrap_or(-1)
    }

    /// Records involving `s`, oriented so that `s` is the first simplex.
    pub fn records_of(&self, s: &Simplex) -> Vec<PairRecord<T>> {
        self.records
            .iter()
            .filter_map(|r| {
                if &r.a == s {
                    Some(r.clone())
                } else if &r.b == s {
                    Some(r.flipped())
                } else {
                    None
                }
            })
            .collect()
    }
}

fn face_related(a: &Simplex, b: &Simplex) -> bool {
    a.is_face_of(b) || b.is_face_of(a)
}

/// Computes every pairwise intersection and checks the dimension bounds:
/// a pair of simplices of dimensions `d1`, `d2` sharing a face of
/// dimension `d3` meets in dimension at most `d1 + d2 − n`, and only in
/// the common face when `d1 + d2 − d3 <= n`.
pub fn singular_set<T: Scalar>(m: &GeometricMap<T>) -> Result<SingularSet<T>> {
    if let Some(w) = general_position_witness(m) {
        let names: Vec<String> = w.iter().map(|v| v.to_string()).collect();
        return Err(Error::GeneralPosition(format!("affinely dependent vertices {}", names.join(", "))));
    }
    let n = m.n as isize;
    let simplices: Vec<&Simplex> = m.domain.iter().collect();
    let maximal: std::collections::BTreeSet<Simplex> = m.domain.maximal_simplices().into_iter().collect();
    let pairs: Vec<(usize, usize)> = (0..simplices.len())
        .flat_map(|i| (i + 1..simplices.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !face_related(simplices[i], simplices[j]))
        .collect();
    let results: Vec<Result<Option<PairRecord<T>>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (simplices[i], simplices[j]);
            let Some(rec) = pair_record(m, a, b) else { return Ok(None) };
            let (d1, d2) = (a.dim() as isize, b.dim() as isize);
            let d3 = a.intersection(b).map_or(-1, |c| c.dim() as isize);
            if rec.kind.dim() > d1 + d2 - n {
                return Err(Error::verify(format!(
                    "images of {a} and {b} meet in dimension {} > {}",
                    rec.kind.dim(),
                    d1 + d2 - n
                )));
            }
            if d1 + d2 - d3 <= n {
                return Err(Error::verify(format!("{a} and {b} should embed jointly but their images cross")));
            }
            Ok((maximal.contains(a) && maximal.contains(b)).then_some(rec))
        })
        .collect();
    let mut records = Vec::new();
    for r in results {
        if let Some(rec) = r? {
            records.push(rec);
        }
    }
    let set = SingularSet { n: m.n, records, pairs_checked: pairs.len() };
    let d = m.domain.dim();
    if set.max_dim() > (2 * d - n).max(-1) {
        return Err(Error::verify(format!("singular set has dimension {} > {}", set.max_dim(), 2 * d - n)));
    }
    Ok(set)
}

/// Checks that the map is injective; on failure returns two maximal
/// simplices whose images meet outside their common face (or one simplex
/// twice if it is flattened).
pub fn verify_injective<T: Scalar>(m: &GeometricMap<T>) -> std::result::Result<(), (Simplex, Simplex)> {
    let maximal = m.domain.maximal_simplices();
    if let Some(s) = maximal.iter().find(|s| !super::affinely_independent(&m.images(s))) {
        return Err((s.clone(), s.clone()));
    }
    let boxes: Vec<_> = maximal.iter().map(|s| bbox(&m.images(s))).collect();
    let bad = (0..maximal.len()).into_par_iter().find_map_first(|i| {
        (i + 1..maximal.len())
            .filter(|&j| boxes_meet(&boxes[i], &boxes[j]))
            .find(|&j| {
                let verts = intersect_simplices(&m.images(&maximal[i]), &m.images(&maximal[j]));
                !only_common_face(&maximal[i], &maximal[j], &verts)
            })
            .map(|j| (i, j))
    });
    match bad {
        None => Ok(()),
        Some((i, j)) => Err((maximal[i].clone(), maximal[j].clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complex_from, vertex};
    use crate::geometry::sample_general_position_map;
    use crate::Rational;
    use num_traits::Signed;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn pt(c: &[(i64, i64)]) -> Point<Rational> {
        Point(c.iter().map(|&(p, d)| q(p, d)).collect())
    }

    fn map(x: &crate::Complex, pts: &[(&str, &[(i64, i64)])]) -> GeometricMap<Rational> {
        let n = pts[0].1.len();
        GeometricMap::new(x.clone(), n, pts.iter().map(|(v, c)| (vertex(v), pt(c))).collect()).unwrap()
    }

    #[test]
    fn crossing_triangles_meet_in_a_segment() {
        // two vertex-disjoint triangles in R³: one in the plane z = 0, the
        // other vertical and piercing it along y = 0 from x = 1/4 to x = 1/2
        let x = complex_from(&[&["a", "b", "c"], &["d", "e", "g"]]);
        let m = map(
            &x,
            &[
                ("a", &[(0, 1), (-1, 1), (0, 1)]),
                ("b", &[(1, 1), (-1, 1), (0, 1)]),
                ("c", &[(0, 1), (1, 1), (0, 1)]),
                ("d", &[(1, 4), (0, 1), (-1, 1)]),
                ("e", &[(1, 2), (0, 1), (-1, 1)]),
                ("g", &[(3, 8), (0, 1), (1, 1)]),
            ],
        );
        let r =
            pair_record(&m, &Simplex::new(["a", "b", "c"]).unwrap(), &Simplex::new(["d", "e", "g"]).unwrap()).unwrap();
        // oracle: the vertical triangle meets z = 0 in the segment between
        // the midpoints of dg and eg: x = (1/4 + 3/8)/2 and (1/2 + 3/8)/2
        let p1 = pt(&[(5, 16), (0, 1), (0, 1)]);
        let p2 = pt(&[(7, 16), (0, 1), (0, 1)]);
        match &r.kind {
            IntersectionKind::Segment(a, b) => {
                let mut got = vec![a.clone(), b.clone()];
                got.sort();
                assert_eq!(got, vec![p1, p2]);
            }
            k => panic!("expected a segment, got {k:?}"),
        }
        for (lam, mu) in &r.preimages {
            assert!(lam.iter().chain(mu).all(|x| !x.is_negative()));
        }
    }

    #[test]
    fn shared_edge_is_not_singular() {
        let x = complex_from(&[&["a", "b", "c"], &["a", "b", "d"]]);
        let m = map(
            &x,
            &[
                ("a", &[(0, 1), (0, 1), (0, 1)]),
                ("b", &[(1, 1), (0, 1), (0, 1)]),
                ("c", &[(0, 1), (1, 1), (0, 1)]),
                ("d", &[(1, 3), (1, 5), (1, 1)]),
            ],
        );
        let s = singular_set(&m).unwrap();
        assert!(s.is_empty());
        assert!(verify_injective(&m).is_ok());
    }

    #[test]
    fn coplanar_overlap_is_detected() {
        let x = complex_from(&[&["a", "b", "c"], &["d", "e", "g"]]);
        let m = map(
            &x,
            &[
                ("a", &[(0, 1), (0, 1)]),
                ("b", &[(4, 1), (0, 1)]),
                ("c", &[(0, 1), (4, 1)]),
                ("d", &[(1, 1), (1, 1)]),
                ("e", &[(5, 1), (1, 1)]),
                ("g", &[(1, 1), (5, 1)]),
            ],
        );
        let r =
            pair_record(&m, &Simplex::new(["a", "b", "c"]).unwrap(), &Simplex::new(["d", "e", "g"]).unwrap()).unwrap();
        assert_eq!(r.kind.dim(), 2);
        assert!(verify_injective(&m).is_err());
    }

    #[test]
    fn generic_maps_into_r5_embed() {
        for name in ["tetrahedron-boundary", "projective-plane-6", "two-triangles-vertex"] {
            let x = crate::fixtures::fixture(name).unwrap();
            for seed in 0..3 {
                let m: GeometricMap<Rational> = sample_general_position_map(&x, 5, seed, 32).unwrap();
                assert!(singular_set(&m).unwrap().is_empty());
                assert!(verify_injective(&m).is_ok());
            }
        }
    }

    #[test]
    fn generic_maps_into_r3() {
        let x = crate::fixtures::fixture("torus-7").unwrap();
        for seed in 0..3 {
            let m: GeometricMap<Rational> = sample_general_position_map(&x, 3, seed, 32).unwrap();
            let s = singular_set(&m).unwrap();
            assert!(s.max_dim() <= 1);
        }
    }
}
