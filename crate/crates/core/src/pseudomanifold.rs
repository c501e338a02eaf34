//! Pseudomanifold verifiers: purity, facet degrees, gallery connectivity,
//! link recognition up to link dimension 2, and orientation.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Complex, Incidence, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::homology::homology_groups;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LinkClass {
    Empty,
    /// 0-disc.
    Point,
    /// 0-sphere.
    PointPair,
    Sphere {
        dim: usize,
    },
    Disc {
        dim: usize,
    },
    Circle {
        components: usize,
    },
    Arc {
        components: usize,
    },
    Curves {
        circles: usize,
        arcs: usize,
    },
    ClosedSurface {
        genus: usize,
        orientable: bool,
        components: usize,
    },
    SurfaceWithBoundary {
        genus: usize,
        orientable: bool,
        boundary_components: usize,
        components: usize,
    },
    Disjoint {
        parts: Vec<LinkClass>,
    },
    NotManifold {
        witness: String,
    },
}

impl LinkClass {
    pub fn is_manifold(&self) -> bool {
        !matches!(self, LinkClass::NotManifold { .. } | LinkClass::Empty)
    }

    /// The class `classify_link` gives a `dim`-sphere.
    pub fn sphere(dim: usize) -> LinkClass {
        match dim {
            0 => LinkClass::PointPair,
            1 => LinkClass::Circle { components: 1 },
            d => LinkClass::Sphere { dim: d },
        }
    }

    pub fn is_sphere(&self, dim: usize) -> bool {
        match (self, dim) {
            (LinkClass::PointPair, 0) | (LinkClass::Circle { components: 1 }, 1) => true,
            (LinkClass::Sphere { dim: d }, _) => *d == dim,
            _ => false,
        }
    }

    pub fn is_disc(&self, dim: usize) -> bool {
        match (self, dim) {
            (LinkClass::Point, 0) | (LinkClass::Arc { components: 1 }, 1) => true,
            (LinkClass::Disc { dim: d }, _) => *d == dim,
            _ => false,
        }
    }

    /// Closed manifold, possibly disconnected.
    pub fn is_closed_manifold(&self) -> bool {
        match self {
            LinkClass::PointPair | LinkClass::Sphere { .. } | LinkClass::Circle { .. } => true,
            LinkClass::ClosedSurface { .. } => true,
            LinkClass::Disjoint { parts } => parts.iter().all(LinkClass::is_closed_manifold),
            _ => false,
        }
    }
}

pub fn classify_link(l: &Complex) -> Result<LinkClass> {
    match l.dim() {
        -1 => Ok(LinkClass::Empty),
        0 => Ok(match l.len() {
            1 => LinkClass::Point,
            2 => LinkClass::PointPair,
            n => LinkClass::NotManifold { witness: format!("{n} isolated points") },
        }),
        1 => Ok(classify_graph(l)),
        2 => Ok(classify_surface(l)),
        d => Err(Error::Dimension { what: "link recognition is limited to dim <= 2", found: d }),
    }
}

fn classify_graph(l: &Complex) -> LinkClass {
    let adj = l.adjacency();
    if let Some((v, n)) = adj.iter().find(|(_, n)| n.is_empty() || n.len() > 2) {
        let why = if n.is_empty() { "isolated" } else { "branch" };
        return LinkClass::NotManifold { witness: format!("{why} vertex {v}") };
    }
    let (mut circles, mut arcs) = (0, 0);
    for comp in l.connected_components() {
        if comp.iter().all(|v| adj[v].len() == 2) {
            circles += 1;
        } else {
            arcs += 1;
        }
    }
    match (circles, arcs) {
        (c, 0) => LinkClass::Circle { components: c },
        (0, a) => LinkClass::Arc { components: a },
        (circles, arcs) => LinkClass::Curves { circles, arcs },
    }
}

fn classify_surface(l: &Complex) -> LinkClass {
    if let Some(s) = l.maximal_simplices().into_iter().find(|s| s.len() != 3) {
        return LinkClass::NotManifold { witness: format!("impure at {s}") };
    }
    let degrees = facet_degrees(l, 2);
    if let Some((e, _)) = degrees.iter().find(|(_, &d)| d > 2) {
        return LinkClass::NotManifold { witness: format!("edge {e} in more than two triangles") };
    }
    let idx = l.index();
    for v in l.vertices() {
        let c = classify_graph(&idx.vertex_link(&v));
        if !c.is_sphere(1) && !c.is_disc(1) {
            return LinkClass::NotManifold { witness: format!("vertex {v} has link {c:?}") };
        }
    }
    let mut parts: Vec<LinkClass> = l
        .components()
        .iter()
        .map(|comp| {
            let chi = comp.euler_characteristic();
            let tops: Vec<Simplex> = comp.simplices_of_dim(2).cloned().collect();
            let orientable = propagate(&tops, &BTreeSet::new()).is_ok();
            let bd =
                Complex::from_simplices(facet_degrees(comp, 2).into_iter().filter(|(_, d)| *d == 1).map(|(e, _)| e));
            let b = bd.connected_components().len();
            let defect = 2 - chi - b as i64;
            let genus = if orientable { defect / 2 } else { defect } as usize;
            match (genus, orientable, b) {
                (0, true, 0) => LinkClass::Sphere { dim: 2 },
                (0, true, 1) => LinkClass::Disc { dim: 2 },
                (g, o, 0) => LinkClass::ClosedSurface { genus: g, orientable: o, components: 1 },
                (g, o, b) => {
                    LinkClass::SurfaceWithBoundary { genus: g, orientable: o, boundary_components: b, components: 1 }
                }
            }
        })
        .collect();
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let n = parts.len();
    if parts.windows(2).all(|w| w[0] == w[1]) {
        return match parts.pop().unwrap() {
            LinkClass::Sphere { .. } => LinkClass::ClosedSurface { genus: 0, orientable: true, components: n },
            LinkClass::Disc { .. } => {
                LinkClass::SurfaceWithBoundary { genus: 0, orientable: true, boundary_components: 1, components: n }
            }
            LinkClass::ClosedSurface { genus, orientable, .. } => {
                LinkClass::ClosedSurface { genus, orientable, components: n }
            }
            LinkClass::SurfaceWithBoundary { genus, orientable, boundary_components, .. } => {
                LinkClass::SurfaceWithBoundary { genus, orientable, boundary_components, components: n }
            }
            other => unreachable!("surface part {other:?}"),
        };
    }
    LinkClass::Disjoint { parts }
}

/// Number of `d`-simplices containing each `(d−1)`-simplex.
fn facet_degrees(x: &Complex, d: usize) -> BTreeMap<Simplex, usize> {
    let mut deg: BTreeMap<Simplex, usize> = x.simplices_of_dim(d - 1).map(|s| (s.clone(), 0)).collect();
    for t in x.simplices_of_dim(d) {
        for f in t.facets() {
            *deg.get_mut(&f).expect("closed complex") += 1;
        }
    }
    deg
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudomanifoldReport {
    pub dim: isize,
    pub is_pure: bool,
    pub facet_degrees_ok: bool,
    pub degree_witness: Option<Simplex>,
    #[serde(skip)]
    pub boundary: Complex,
    pub boundary_facets: usize,
    pub gallery_connected: bool,
    pub gallery_components: usize,
    /// Links of simplices of positive dimension are spheres or discs.
    pub positive_links_ok: Option<bool>,
    pub link_witness: Option<Simplex>,
    pub vertex_links: BTreeMap<String, LinkClass>,
    pub vertex_links_manifold: Option<bool>,
    pub isolated_singularities: Option<bool>,
    /// Every vertex link is a single sphere or disc as well.
    pub combinatorial_manifold: Option<bool>,
    pub orientable: Option<bool>,
}

pub fn check_pseudomanifold(x: &Complex) -> Result<PseudomanifoldReport> {
    if x.is_empty() {
        return Err(Error::Dimension { what: "pseudomanifold check needs a nonempty complex", found: -1 });
    }
    if !x.is_connected() {
        return Err(Error::Disconnected);
    }
    let dim = x.dim();
    let d = dim as usize;
    let is_pure = x.is_pure();
    let tops: Vec<&Simplex> = x.simplices_of_dim(d).collect();
    let (degrees, degree_witness, boundary) = if d == 0 {
        (true, None, Complex::empty())
    } else {
        let deg = facet_degrees(x, d);
        let witness = deg.iter().find(|(_, &k)| k == 0 || k > 2).map(|(s, _)| s.clone());
        let boundary = Complex::from_simplices(deg.iter().filter(|(_, &k)| k == 1).map(|(s, _)| s.clone()));
        (witness.is_none(), witness, boundary)
    };
    let gallery_components = gallery_components(&tops);
    Ok(PseudomanifoldReport {
        dim,
        is_pure,
        facet_degrees_ok: is_pure && degrees,
        degree_witness,
        boundary_facets: boundary.simplices_of_dim(d.saturating_sub(1)).count(),
        boundary,
        gallery_connected: gallery_components == 1,
        gallery_components,
        positive_links_ok: None,
        link_witness: None,
        vertex_links: BTreeMap::new(),
        vertex_links_manifold: None,
        isolated_singularities: None,
        combinatorial_manifold: None,
        orientable: None,
    })
}

fn gallery_components(tops: &[&Simplex]) -> usize {
    let mut by_facet: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (i, t) in tops.iter().enumerate() {
        if t.len() > 1 {
            for f in t.facets() {
                by_facet.entry(f).or_default().push(i);
            }
        }
    }
    let mut parent: Vec<usize> = (0..tops.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for group in by_facet.values() {
        for w in group.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    (0..tops.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Fills the link fields of `report`.
pub fn check_isolated_singularities(x: &Complex, report: &mut PseudomanifoldReport) -> Result<()> {
    let d = x.dim();
    if d > 3 {
        return Err(Error::Dimension { what: "isolated-singularity check needs dim <= 3", found: d });
    }
    let d = d.max(0) as usize;
    let idx = Incidence::new(x);
    let positive: Vec<&Simplex> = x.iter().filter(|s| s.dim() > 0 && s.dim() < d).collect();
    let bad = positive.par_iter().find_first(|s| {
        let want = d - 1 - s.dim();
        match classify_link(&idx.link(s)) {
            Ok(c) => !(c.is_sphere(want) || c.is_disc(want)),
            Err(_) => true,
        }
    });
    let verts = x.vertices();
    let classes: Vec<(Vertex, LinkClass)> =
        verts.par_iter().map(|v| Ok((v.clone(), classify_link(&idx.vertex_link(v))?))).collect::<Result<_>>()?;

    let positive_ok = bad.is_none();
    let vertex_ok = d == 0 || classes.iter().all(|(_, c)| c.is_manifold());
    let want = d.saturating_sub(1);
    let single = classes.iter().all(|(_, c)| c.is_sphere(want) || c.is_disc(want));
    report.link_witness = bad.map(|s| (*s).clone());
    report.positive_links_ok = Some(positive_ok);
    report.vertex_links_manifold = Some(vertex_ok);
    report.isolated_singularities = Some(report.facet_degrees_ok && positive_ok && vertex_ok);
    report.combinatorial_manifold = Some(report.facet_degrees_ok && positive_ok && single);
    report.vertex_links = classes.into_iter().map(|(v, c)| (v.to_string(), c)).collect();
    Ok(())
}

/// Sign of each top simplex relative to its sorted vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationAssignment {
    #[serde(serialize_with = "pairs")]
    pub signs: BTreeMap<Simplex, i8>,
}

fn pairs<S: serde::Serializer>(m: &BTreeMap<Simplex, i8>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter())
}

impl OrientationAssignment {
    /// Interior facets receive opposite induced orientations.
    pub fn is_consistent(&self) -> bool {
        let mut seen: HashMap<Simplex, i8> = HashMap::new();
        for (t, &s) in &self.signs {
            for (i, f) in t.facets().into_iter().enumerate() {
                let induced = s * parity(i);
                if let Some(prev) = seen.insert(f, induced) {
                    if prev == induced {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Closed walk of facet-adjacent top simplices along which orientation
/// propagation returns with the wrong sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddCycle {
    pub cycle: Vec<Simplex>,
}

fn parity(i: usize) -> i8 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Orients the top simplices. Top simplices that contain one of
/// `cone_vertices` are cones `w∗τ` and get the orientation `−(w, τ)` where
/// `τ` carries the orientation induced from the rest of the complex.
pub fn orient(
    x: &Complex,
    cone_vertices: &BTreeSet<Vertex>,
) -> Result<std::result::Result<OrientationAssignment, OddCycle>> {
    let d = x.dim().max(0) as usize;
    let tops: Vec<Simplex> = x.simplices_of_dim(d).cloned().collect();
    if d > 0 {
        if let Some((f, _)) = facet_degrees(x, d).into_iter().find(|(_, k)| *k > 2) {
            return Err(Error::verify(format!("facet {f} lies in more than two top simplices")));
        }
    }
    let with_rule = propagate(&tops, cone_vertices);
    match with_rule {
        Ok(a) if a.is_consistent() => Ok(Ok(a)),
        _ => match propagate(&tops, &BTreeSet::new()) {
            Err(cycle) => Ok(Err(cycle)),
            Ok(_) => Err(Error::verify("cone orientation rule disagrees with propagation")),
        },
    }
}

fn propagate(
    tops: &[Simplex],
    cone_vertices: &BTreeSet<Vertex>,
) -> std::result::Result<OrientationAssignment, OddCycle> {
    let n = tops.len();
    let mut by_facet: HashMap<Simplex, Vec<(usize, usize)>> = HashMap::new();
    for (i, t) in tops.iter().enumerate() {
        if t.len() > 1 {
            for (k, f) in t.facets().into_iter().enumerate() {
                by_facet.entry(f).or_default().push((i, k));
            }
        }
    }
    // adjacency: (neighbor, relative sign)
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for pair in by_facet.values().filter(|p| p.len() == 2) {
        let ((a, ia), (b, ib)) = (pair[0], pair[1]);
        let rel = -parity(ia + ib);
        adj[a].push((b, rel));
        adj[b].push((a, rel));
    }
    let is_cone: Vec<bool> = tops.iter().map(|t| t.vertices().iter().any(|v| cone_vertices.contains(v))).collect();

    let mut sign: Vec<i8> = vec![0; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut depth: Vec<usize> = vec![0; n];

    let bfs = |roots: Vec<usize>,
               allowed: &dyn Fn(usize) -> bool,
               sign: &mut Vec<i8>,
               parent: &mut Vec<usize>,
               depth: &mut Vec<usize>|
     -> std::result::Result<(), OddCycle> {
        let mut queue: VecDeque<usize> = roots.into();
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adj[a] {
                if !allowed(b) {
                    continue;
                }
                let want = rel * sign[a];
                if sign[b] == 0 {
                    sign[b] = want;
                    parent[b] = a;
                    depth[b] = depth[a] + 1;
                    queue.push_back(b);
                } else if sign[b] != want {
                    return Err(OddCycle { cycle: tree_cycle(a, b, parent, depth, tops) });
                }
            }
        }
        Ok(())
    };

    // the non-cone part first
    let plain = |i: usize| !is_cone[i];
    for r in 0..n {
        if plain(r) && sign[r] == 0 {
            sign[r] = 1;
            bfs(vec![r], &plain, &mut sign, &mut parent, &mut depth)?;
        }
    }
    // cone rule
    let mut seeded = Vec::new();
    for (i, t) in tops.iter().enumerate() {
        if !is_cone[i] || sign[i] != 0 {
            continue;
        }
        let ws: Vec<&Vertex> = t.vertices().iter().filter(|v| cone_vertices.contains(*v)).collect();
        let [w] = ws[..] else { continue };
        let tau = t.without(w).expect("cone top has a base");
        let Some(base) = by_facet.get(&tau) else { continue };
        let Some(&(j, k)) = base.iter().find(|(j, _)| !is_cone[*j] && sign[*j] != 0) else { continue };
        let s_tau = sign[j] * parity(k);
        sign[i] = -s_tau * parity(t.position(w).expect("w in t"));
        seeded.push(i);
    }
    let any = |_: usize| true;
    let mut roots = seeded;
    roots.extend((0..n).filter(|&i| sign[i] != 0 && is_cone[i]));
    bfs(roots, &any, &mut sign, &mut parent, &mut depth)?;
    for r in 0..n {
        if sign[r] == 0 {
            sign[r] = 1;
            bfs(vec![r], &any, &mut sign, &mut parent, &mut depth)?;
        }
    }
    let signs = tops.iter().cloned().zip(sign).collect();
    Ok(OrientationAssignment { signs })
}

fn tree_cycle(a: usize, b: usize, parent: &[usize], depth: &[usize], tops: &[Simplex]) -> Vec<Simplex> {
    let (mut pa, mut pb) = (vec![a], vec![b]);
    let (mut x, mut y) = (a, b);
    while x != y {
        if depth[x] >= depth[y] && parent[x] != x {
            x = parent[x];
            pa.push(x);
        } else if parent[y] != y {
            y = parent[y];
            pb.push(y);
        } else {
            // different trees (seeded roots): report both paths
            break;
        }
    }
    if x == y {
        pb.pop();
    }
    pa.extend(pb.into_iter().rev());
    pa.into_iter().map(|i| tops[i].clone()).collect()
}

/// Rank of `H_d(X, ∂X)`; for a pseudomanifold this is the number of
/// orientable gallery components.
pub fn top_relative_betti(x: &Complex, report: &PseudomanifoldReport) -> Result<usize> {
    let d = x.dim().max(0) as usize;
    let rel = (!report.boundary.is_empty()).then_some(&report.boundary);
    let h = homology_groups(x, rel)?;
    Ok(h.groups.get(d).map_or(0, |g| g.betti))
}

/// Runs every verifier.
pub fn full_report(
    x: &Complex,
    cone_vertices: &BTreeSet<Vertex>,
) -> Result<(PseudomanifoldReport, std::result::Result<OrientationAssignment, OddCycle>)> {
    let mut report = check_pseudomanifold(x)?;
    if report.facet_degrees_ok {
        check_isolated_singularities(x, &mut report)?;
    }
    let orientation = orient(x, cone_vertices)?;
    report.orientable = Some(orientation.is_ok());
    Ok((report, orientation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complex_from;
    use crate::fixtures::fixture;

    fn f(name: &str) -> Complex {
        fixture(name).unwrap()
    }

    #[test]
    fn basic_reports() {
        let r = check_pseudomanifold(&f("tetrahedron-boundary")).unwrap();
        assert!(r.is_pure && r.facet_degrees_ok && r.gallery_connected);
        assert!(r.boundary.is_empty());

        let r = check_pseudomanifold(&f("book-of-three")).unwrap();
        assert!(!r.facet_degrees_ok);
        assert_eq!(r.degree_witness, Some(Simplex::new(["a", "b"]).unwrap()));

        let r = check_pseudomanifold(&f("two-triangles-vertex")).unwrap();
        assert!(r.is_pure && r.facet_degrees_ok);
        assert_eq!(r.boundary_facets, 6);
        assert!(!r.gallery_connected);

        let two = complex_from(&[&["a", "b"], &["c", "d"]]);
        assert!(matches!(check_pseudomanifold(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn boundary_matches_free_faces() {
        for (name, x) in crate::fixtures::all() {
            let Ok(r) = check_pseudomanifold(&x) else { continue };
            if !r.is_pure || x.dim() < 1 {
                continue;
            }
            let (_, bd) = x.boundary_and_free_faces();
            let d = x.dim() as usize;
            let want = Complex::from_simplices(bd.simplices_of_dim(d - 1).cloned());
            assert_eq!(r.boundary, want, "{name}");
        }
    }

    #[test]
    fn link_classes() {
        assert_eq!(classify_link(&f("three-cycle")).unwrap(), LinkClass::Circle { components: 1 });
        assert_eq!(classify_link(&f("tetrahedron-boundary")).unwrap(), LinkClass::Sphere { dim: 2 });
        assert_eq!(classify_link(&f("four-cycle-cone")).unwrap(), LinkClass::Disc { dim: 2 });
        assert_eq!(classify_link(&f("edge")).unwrap(), LinkClass::Arc { components: 1 });
        assert_eq!(
            classify_link(&f("torus-7")).unwrap(),
            LinkClass::ClosedSurface { genus: 1, orientable: true, components: 1 }
        );
        // oracle: χ = V − E + F = 6 − 15 + 10 = 1 and an odd propagation cycle
        let rp2 = f("projective-plane-6");
        assert_eq!(rp2.f_vector(), vec![6, 15, 10]);
        assert!(orient(&rp2, &BTreeSet::new()).unwrap().is_err());
        assert_eq!(
            classify_link(&rp2).unwrap(),
            LinkClass::ClosedSurface { genus: 1, orientable: false, components: 1 }
        );
        assert!(matches!(classify_link(&f("book-of-three")).unwrap(), LinkClass::NotManifold { .. }));
        assert!(matches!(classify_link(&f("pinched-spheres")).unwrap(), LinkClass::NotManifold { .. }));
        assert!(classify_link(&f("simplex4-boundary")).is_err());
        let annulus = complex_from(&[
            &["a", "b", "x"],
            &["b", "x", "y"],
            &["b", "c", "y"],
            &["c", "y", "z"],
            &["a", "c", "z"],
            &["a", "x", "z"],
        ]);
        assert_eq!(
            classify_link(&annulus).unwrap(),
            LinkClass::SurfaceWithBoundary { genus: 0, orientable: true, boundary_components: 2, components: 1 }
        );
    }

    #[test]
    fn singularities() {
        let x = f("simplex4-boundary");
        let (r, o) = full_report(&x, &BTreeSet::new()).unwrap();
        assert_eq!(r.isolated_singularities, Some(true));
        assert!(r.vertex_links.values().all(|c| c.is_sphere(2)));
        assert!(o.is_ok());

        let x = f("pinched-spheres");
        let (r, _) = full_report(&x, &BTreeSet::new()).unwrap();
        assert!(r.boundary.is_empty());
        assert_eq!(r.isolated_singularities, Some(true));
        assert_eq!(r.combinatorial_manifold, Some(false));
        assert_eq!(r.vertex_links["p"], LinkClass::Circle { components: 2 });

        let x = f("torus-cone");
        let (r, _) = full_report(&x, &BTreeSet::new()).unwrap();
        assert_eq!(r.isolated_singularities, Some(true));
        assert_eq!(r.vertex_links["o"], LinkClass::ClosedSurface { genus: 1, orientable: true, components: 1 });
        assert_eq!(r.combinatorial_manifold, Some(false));
    }

    #[test]
    fn orientation() {
        let x = f("tetrahedron-boundary");
        let a = orient(&x, &BTreeSet::new()).unwrap().unwrap();
        assert_eq!(a.signs.len(), 4);
        assert!(a.is_consistent());

        let rp2 = f("projective-plane-6");
        let cyc = orient(&rp2, &BTreeSet::new()).unwrap().unwrap_err().cycle;
        // oracle: walking the cycle multiplies the transition signs to −1
        let mut prod = 1i8;
        for k in 0..cyc.len() {
            let (a, b) = (&cyc[k], &cyc[(k + 1) % cyc.len()]);
            let shared = a.intersection(b).unwrap();
            assert_eq!(shared.len(), 2, "consecutive cycle members share an edge");
            let ia = a.vertices().iter().position(|v| !shared.contains(v)).unwrap();
            let ib = b.vertices().iter().position(|v| !shared.contains(v)).unwrap();
            prod *= -parity(ia + ib);
        }
        assert_eq!(prod, -1);

        let disc = f("four-cycle-cone");
        let r = check_pseudomanifold(&disc).unwrap();
        assert!(orient(&disc, &BTreeSet::new()).unwrap().is_ok());
        assert_eq!(top_relative_betti(&disc, &r).unwrap(), 1);
    }

    #[test]
    fn cone_rule_matches_propagation() {
        // a 3-ball (cone over ∂Δ³) with a cone over a boundary disc attached
        let ball =
            complex_from(&[&["a", "b", "c", "o"], &["a", "b", "d", "o"], &["a", "c", "d", "o"], &["b", "c", "d", "o"]]);
        let maxi = ball.maximal_simplices();
        let mut tops: Vec<Vec<&str>> = maxi.iter().map(|s| s.vertices().iter().map(|v| &**v).collect()).collect();
        tops.push(vec!["a", "b", "c", "w"]);
        let x = validate_complex_strs(&tops);
        let cones: BTreeSet<Vertex> = [crate::complex::vertex("w")].into();
        let a = orient(&x, &cones).unwrap().unwrap();
        assert!(a.is_consistent());
    }

    fn validate_complex_strs(raw: &[Vec<&str>]) -> Complex {
        crate::complex::validate_complex(raw).unwrap()
    }

    #[test]
    fn orientability_matches_relative_homology() {
        for (name, x) in crate::fixtures::all() {
            let Ok(r) = check_pseudomanifold(&x) else { continue };
            if !r.facet_degrees_ok || !r.gallery_connected {
                continue;
            }
            let ok = orient(&x, &BTreeSet::new()).unwrap().is_ok();
            assert_eq!(top_relative_betti(&x, &r).unwrap(), usize::from(ok), "{name}");
        }
    }
}
