//! Choosing barycenters so that a general-position map of a 2-complex into
//! `R^3` embeds the spine, and extending the embedding to a regular
//! neighborhood of the spine.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{intersect_simplices, singular_set, verify_injective, GeometricMap, IntersectionKind, Point, SingularSet};
use crate::complex::{
    barycentric_subdivision, relative_barycentric_subdivision, simplicial_neighborhood, Complex, Neighborhood, Simplex,
    SubdivisionMap, Vertex,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const BARYCENTER_ATTEMPTS: usize = 1000;
const WEIGHT_MAX: i64 = 1000;

#[derive(Clone, Debug)]
pub struct NeighborhoodEmbedding<T> {
    /// `B(B(X), K)`.
    pub subdivision: SubdivisionMap,
    pub neighborhood: Neighborhood,
    /// Coordinates of the neighborhood `N_ε` (its domain is `neighborhood.n`).
    pub map: GeometricMap<T>,
}

#[derive(Clone, Debug)]
pub struct SpineEmbedding<T> {
    pub base: GeometricMap<T>,
    pub singular: SingularSet<T>,
    /// `B(X)` with barycenter labels.
    pub subdivision: SubdivisionMap,
    /// Barycentric coordinates of the chosen barycenter of each simplex of
    /// positive dimension.
    pub barycenters: BTreeMap<Simplex, Vec<T>>,
    /// `B(X)` mapped with the chosen barycenters.
    pub subdivided: GeometricMap<T>,
    pub spine: Complex,
    /// Samples drawn per simplex before acceptance.
    pub attempts: BTreeMap<Simplex, usize>,
    pub delta: Option<T>,
    pub epsilon: Option<T>,
    pub nbhd: Option<NeighborhoodEmbedding<T>>,
}

impl<T: Scalar> SpineEmbedding<T> {
    pub fn spine_map(&self) -> GeometricMap<T> {
        self.subdivided.restrict(&self.spine)
    }
}

fn on_segment<T: Scalar>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> bool {
    let ab = b.sub(a);
    let len = ab.norm_sq();
    if len.is_zero() {
        return p == a;
    }
    let t = p.sub(a).dot(&ab) / len;
    !t.is_negative() && t <= T::one() && a.add(&ab.scale(&t)) == *p
}

fn in_record<T: Scalar>(p: &Point<T>, kind: &IntersectionKind<T>) -> bool {
    match kind {
        IntersectionKind::Empty => false,
        IntersectionKind::Point(q) => p == q,
        IntersectionKind::Segment(a, b) => on_segment(p, a, b),
        IntersectionKind::Polytope { .. } => unreachable!("singular set has dimension <= 1"),
    }
}

fn strictly_between<T: Scalar>(x: &T) -> bool {
    x.is_positive() && *x < T::one()
}

/// Whether the leg `[a, b]` (with `a` the top barycenter) meets the segment
/// transversely: not at all, or in one point interior to both.
fn meets_transversely<T: Scalar>(a: &Point<T>, b: &Point<T>, s0: &Point<T>, s1: &Point<T>) -> bool {
    let verts = intersect_simplices(&[a, b], &[s0, s1]);
    match verts.as_slice() {
        [] => true,
        [(lam, mu)] => lam.iter().all(strictly_between) && mu.iter().all(strictly_between),
        _ => false,
    }
}

fn sample_weights<T: Scalar>(rng: &mut ChaCha8Rng, k: usize) -> Vec<T> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=WEIGHT_MAX)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| T::from_ratio(x, total)).collect()
}

pub fn choose_spine_barycenters<T: Scalar>(m: &GeometricMap<T>, seed: u64) -> Result<SpineEmbedding<T>> {
    choose_spine_barycenters_from(m, seed, &BTreeMap::new())
}

/// As [`choose_spine_barycenters`], but tries the given barycentric
/// coordinates first for the listed simplices.
pub fn choose_spine_barycenters_from<T: Scalar>(
    m: &GeometricMap<T>,
    seed: u64,
    first_try: &BTreeMap<Simplex, Vec<T>>,
) -> Result<SpineEmbedding<T>> {
    let d = m.domain.dim();
    if d != 2 || m.n != 3 {
        return Err(Error::Dimension { what: "spine embedding is implemented for 2-complexes in R^3", found: d });
    }
    let singular = singular_set(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);

    let mut barycenters: BTreeMap<Simplex, Vec<T>> = BTreeMap::new();
    let mut attempts: BTreeMap<Simplex, usize> = BTreeMap::new();
    let mut draw = |s: &Simplex, rng: &mut ChaCha8Rng, accept: &mut dyn FnMut(&Vec<T>) -> bool| -> Result<Vec<T>> {
        let mut preset = first_try.get(s).cloned();
        for k in 1..=BARYCENTER_ATTEMPTS {
            let w = preset.take().unwrap_or_else(|| sample_weights(rng, s.len()));
            if accept(&w) {
                attempts.insert(s.clone(), k);
                return Ok(w);
            }
        }
        Err(Error::BudgetExhausted { attempts: BARYCENTER_ATTEMPTS, what: format!("barycenter of {s}") })
    };

    // barycenters of edges avoid the singular set
    for e in m.domain.simplices_of_dim(1) {
        let w = draw(e, &mut rng, &mut |w| {
            let p = m.eval(e, w);
            singular.records.iter().all(|r| !in_record(&p, &r.kind))
        })?;
        barycenters.insert(e.clone(), w);
    }

    // top simplices in order; legs run from the barycenter to the edge barycenters
    let tops: Vec<Simplex> = m.domain.simplices_of_dim(2).cloned().collect();
    let mut legs: BTreeMap<Simplex, Vec<(Point<T>, Point<T>)>> = BTreeMap::new();
    for sigma in &tops {
        let feet: Vec<Point<T>> = sigma.facets().iter().map(|e| m.eval(e, &barycenters[e])).collect();
        let records = singular.records_of(sigma);
        // points of earlier spines on the shared singular segments
        let mut avoid: Vec<Point<T>> = Vec::new();
        for r in &records {
            match &r.kind {
                IntersectionKind::Point(p) => avoid.push(p.clone()),
                IntersectionKind::Segment(s0, s1) => {
                    for (a, b) in legs.get(&r.b).into_iter().flatten() {
                        for (lam, _) in intersect_simplices(&[a, b], &[s0, s1]) {
                            let q = Point::combination(&[a, b], &lam);
                            if !on_segment(&q, s0, s1) {
                                return Err(Error::verify("spine crossing point off the singular segment"));
                            }
                            avoid.push(q);
                        }
                    }
                }
                _ => {}
            }
        }
        let w = draw(sigma, &mut rng, &mut |w| {
            let c = m.eval(sigma, w);
            feet.iter().all(|foot| {
                avoid.iter().all(|p| !on_segment(p, &c, foot))
                    && records.iter().all(|r| match &r.kind {
                        IntersectionKind::Segment(s0, s1) => meets_transversely(&c, foot, s0, s1),
                        _ => true,
                    })
            })
        })?;
        let c = m.eval(sigma, &w);
        legs.insert(sigma.clone(), feet.into_iter().map(|f| (c.clone(), f)).collect());
        barycenters.insert(sigma.clone(), w);
    }

    let subdivision = barycentric_subdivision(&m.domain);
    let mut points = BTreeMap::new();
    for (s, label) in &subdivision.barycenter {
        let p = if s.len() == 1 { m.point(&s.vertices()[0]).clone() } else { m.eval(s, &barycenters[s]) };
        points.insert(label.clone(), p);
    }
    let subdivided = GeometricMap::new(subdivision.child.clone(), m.n, points)?;
    let spine_vertices: Vec<&Vertex> =
        subdivision.barycenter.iter().filter(|(s, _)| s.len() > 1).map(|(_, v)| v).collect();
    let spine = subdivision.child.full_subcomplex(spine_vertices);
    if let Err((a, b)) = verify_injective(&subdivided.restrict(&spine)) {
        return Err(Error::verify(format!("spine images of {a} and {b} intersect")));
    }
    Ok(SpineEmbedding {
        base: m.clone(),
        singular,
        subdivision,
        barycenters,
        subdivided,
        spine,
        attempts,
        delta: None,
        epsilon: None,
        nbhd: None,
    })
}

fn point_segment_sq<T: Scalar>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    let ab = b.sub(a);
    let len = ab.norm_sq();
    if len.is_zero() {
        return p.sub(a).norm_sq();
    }
    let mut t = p.sub(a).dot(&ab) / len;
    if t.is_negative() {
        t = T::zero();
    } else if t > T::one() {
        t = T::one();
    }
    p.sub(&a.add(&ab.scale(&t))).norm_sq()
}

/// Exact squared distance between segments `[p0, p1]` and `[q0, q1]`
/// (either may be degenerate).
pub fn segment_distance_sq<T: Scalar>(p0: &Point<T>, p1: &Point<T>, q0: &Point<T>, q1: &Point<T>) -> T {
    let mut best = [
        point_segment_sq(p0, q0, q1),
        point_segment_sq(p1, q0, q1),
        point_segment_sq(q0, p0, p1),
        point_segment_sq(q1, p0, p1),
    ]
    .into_iter()
    .reduce(|a, b| if b < a { b } else { a })
    .unwrap();
    let (u, v, w) = (p1.sub(p0), q1.sub(q0), q0.sub(p0));
    let (uu, vv, uv, wu, wv) = (u.norm_sq(), v.norm_sq(), u.dot(&v), w.dot(&u), w.dot(&v));
    let den = uu.clone() * vv.clone() - uv.clone() * uv.clone();
    if !den.is_zero() {
        let s = (wu.clone() * vv - wv.clone() * uv.clone()) / den.clone();
        let t = (wu * uv - wv * uu) / den;
        let unit = |x: &T| !x.is_negative() && *x <= T::one();
        if unit(&s) && unit(&t) {
            let dist = p0.add(&u.scale(&s)).sub(&q0.add(&v.scale(&t))).norm_sq();
            if dist < best {
                best = dist;
            }
        }
    }
    best
}

/// Spine pieces inside a simplex of the input, as segments (points are
/// degenerate segments).
fn pieces<T: Scalar>(se: &SpineEmbedding<T>, sigma: &Simplex) -> Vec<(Point<T>, Point<T>)> {
    se.spine
        .iter()
        .filter(|k| {
            let carrier = se.subdivision.carrier(k).expect("spine simplex has a carrier");
            carrier.is_face_of(sigma)
        })
        .map(|k| {
            let ps = se.subdivided.images(k);
            (ps[0].clone(), ps[ps.len() - 1].clone())
        })
        .collect()
}

/// Fills `delta`, `epsilon` and the embedded neighborhood `N_ε`.
///
/// `δ` is at most half the distance between the spine pieces of any two
/// maximal simplices sharing at most a vertex. On a simplex with longest
/// image edge `D`, `f` is `sqrt(d+1)·D`-Lipschitz for the standard simplex
/// metric, and every point of `N_ε` lies within `sqrt(2)·ε` of the spine in
/// that metric; so `ε <= δ / (2·sqrt(2(d+1))·D)` keeps images within `δ/2`
/// of the spine. `ε` is rounded down to a power of 1/2.
pub fn epsilon_neighborhood_embedding<T: Scalar>(mut se: SpineEmbedding<T>) -> Result<SpineEmbedding<T>> {
    let x = se.base.domain.clone();
    let maximal = x.maximal_simplices();
    let piece: Vec<Vec<(Point<T>, Point<T>)>> = maximal.iter().map(|s| pieces(&se, s)).collect();
    let mut min_sq: Option<T> = None;
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            if maximal[i].intersection(&maximal[j]).is_some_and(|c| c.len() > 1) {
                continue;
            }
            for (a0, a1) in &piece[i] {
                for (b0, b1) in &piece[j] {
                    let dsq = segment_distance_sq(a0, a1, b0, b1);
                    if min_sq.as_ref().is_none_or(|m| dsq < *m) {
                        min_sq = Some(dsq);
                    }
                }
            }
        }
    }
    let two = T::from_int(2);
    let delta = match min_sq {
        None => T::one(),
        Some(d) if d.is_zero() => return Err(Error::verify("spines of far-apart simplices touch")),
        Some(d) => d.sqrt_lower() / two.clone(),
    };

    let mut bound = T::from_ratio(1, 2);
    for s in &maximal {
        if s.len() < 2 {
            continue;
        }
        let pts = se.base.images(s);
        let mut max_sq = T::zero();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let e = pts[a].sub(pts[b]).norm_sq();
                if e > max_sq {
                    max_sq = e;
                }
            }
        }
        let c = (T::from_int(2 * s.len() as i64) * max_sq).sqrt_upper();
        let e = delta.clone() / (two.clone() * c);
        if e < bound {
            bound = e;
        }
    }
    let mut eps = T::from_ratio(1, 2);
    while eps > bound {
        eps = eps / two.clone();
    }

    let relative = relative_barycentric_subdivision(&se.subdivision.child, &se.spine)?;
    let neighborhood = simplicial_neighborhood(&relative.child, &se.spine)?;
    for _ in 0..20 {
        let map = place_neighborhood(&se, &relative, &neighborhood, &eps)?;
        if verify_injective(&map).is_ok() {
            se.delta = Some(delta);
            se.epsilon = Some(eps);
            se.nbhd = Some(NeighborhoodEmbedding { subdivision: relative, neighborhood, map });
            return Ok(se);
        }
        eps = eps / two.clone();
    }
    Err(Error::verify("regular neighborhood of the spine does not embed"))
}

fn place_neighborhood<T: Scalar>(
    se: &SpineEmbedding<T>,
    relative: &SubdivisionMap,
    nb: &Neighborhood,
    eps: &T,
) -> Result<GeometricMap<T>> {
    let mut points = BTreeMap::new();
    for u in nb.n.vertices() {
        let tau = &relative.parent[&u];
        let p = if tau.len() == 1 {
            se.subdivided.point(&tau.vertices()[0]).clone()
        } else {
            let (core, rest): (Vec<&Vertex>, Vec<&Vertex>) =
                tau.vertices().iter().partition(|v| se.spine.contains_vertex(v));
            let [a] = rest[..] else {
                return Err(Error::verify(format!(
                    "subdivided simplex {tau} has {} vertices off the spine",
                    rest.len()
                )));
            };
            let core_pts: Vec<&Point<T>> = core.iter().map(|v| se.subdivided.point(v)).collect();
            let c = Point::centroid(&core_pts);
            c.scale(&(T::one() - eps.clone())).add(&se.subdivided.point(a).scale(eps))
        };
        points.insert(u, p);
    }
    GeometricMap::new(nb.n.clone(), se.base.n, points)
}
