//! Assembles the handlebody `M` around the spine from one triangulated ball
//! per spine vertex and one tube per spine edge, and traces the copy `L` of
//! the spine neighbourhood through it.
//!
//! Cross-sections of tubes are 4-gons `pa, q1, pb, q2` around a centre `c`;
//! the sheet crosses them along `pa − c − pb`, with `pa` on the side of the
//! smaller vertex of the X-edge.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::sheets::SheetData;
use crate::complex::{vertex, Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::geometry::SpineEmbedding;
use crate::pseudomanifold::{check_isolated_singularities, check_pseudomanifold, classify_link, orient, LinkClass};
use crate::scalar::Scalar;

/// Vertex indices of a tube end: centre, `pa`, `q1`, `pb`, `q2`.
type Section = [usize; 5];

/// The cross-section triangles, as sorted index triples into a `Section`.
const SECTION_TRIANGLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 1, 4]];

#[derive(Default)]
struct Builder {
    roles: Vec<String>,
    tets: Vec<Vec<usize>>,
    l: Vec<Vec<usize>>,
    lv: BTreeMap<Vertex, Vec<Vec<usize>>>,
    /// X-vertex `v` and X-edge `e ∋ v` → the pole of the ball of `e` facing `v`.
    poles: BTreeMap<(Vertex, Simplex), usize>,
}

impl Builder {
    fn new_vertex(&mut self, role: String) -> usize {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn ball(&mut self, centre: usize, sphere: &[[usize; 3]]) {
        for t in sphere {
            self.tets.push(vec![centre, t[0], t[1], t[2]]);
        }
    }

    fn lv(&mut self, v: &Vertex, s: Vec<usize>) {
        self.lv.entry(v.clone()).or_default().push(s);
    }
}

fn label(i: usize) -> Vertex {
    vertex(&format!("m{i}"))
}

fn to_complex(simplices: &[Vec<usize>]) -> Result<Complex> {
    let mut out = Vec::with_capacity(simplices.len());
    for s in simplices {
        out.push(Simplex::from_vertices(s.iter().map(|&i| label(i)).collect())?);
    }
    Ok(Complex::from_simplices(out))
}

enum Meridian {
    Real { xa: usize, qe: usize, xb: usize, qw: usize },
    Dummy(usize),
}

impl Meridian {
    fn east(&self, pa: usize, pb: usize) -> Vec<usize> {
        match *self {
            Meridian::Real { xa, qe, xb, .. } => vec![pa, xa, qe, xb, pb],
            Meridian::Dummy(y) => vec![pa, y, pb],
        }
    }

    fn west(&self, pa: usize, pb: usize) -> Vec<usize> {
        match *self {
            Meridian::Real { xa, xb, qw, .. } => vec![pb, xb, qw, xa, pa],
            Meridian::Dummy(y) => vec![pb, y, pa],
        }
    }
}

fn fan(apex: usize, cycle: &[usize]) -> Vec<[usize; 3]> {
    (0..cycle.len()).map(|k| [apex, cycle[k], cycle[(k + 1) % cycle.len()]]).collect()
}

/// Ball around the barycentre of an X-edge `e = ab`: poles towards `a` and
/// `b`, one meridian per sheet (in angular order, east = next sheet), a
/// 4-gon tube disc on each meridian, and lunes fanned in between. Returns
/// the tube sections keyed by sheet.
fn edge_ball(b: &mut Builder, e: &Simplex, sheets: &[Simplex]) -> BTreeMap<Simplex, Section> {
    let (va, vb) = (e.vertices()[0].clone(), e.vertices()[1].clone());
    let c = b.new_vertex(format!("centre {e}"));
    let pa = b.new_vertex(format!("pole {e} towards {va}"));
    let pb = b.new_vertex(format!("pole {e} towards {vb}"));
    b.poles.insert((va.clone(), e.clone()), pa);
    b.poles.insert((vb.clone(), e.clone()), pb);
    b.lv(&va, vec![pa]);
    b.lv(&vb, vec![pb]);
    let mut sphere = Vec::new();
    let mut meridians = Vec::new();
    let mut sections = BTreeMap::new();
    for t in sheets {
        let d = b.new_vertex(format!("disc {e} sheet {t}"));
        let xa = b.new_vertex(format!("disc {e} sheet {t} side {va}"));
        let xb = b.new_vertex(format!("disc {e} sheet {t} side {vb}"));
        let qe = b.new_vertex(format!("disc {e} sheet {t} east"));
        let qw = b.new_vertex(format!("disc {e} sheet {t} west"));
        sphere.extend([[d, qe, xa], [d, xa, qw], [d, qw, xb], [d, xb, qe]]);
        // seen from outside the ball the disc boundary runs qE → xa → qW → xb
        sections.insert(t.clone(), [d, xa, qw, xb, qe]);
        b.l.extend([vec![c, pa, xa], vec![c, xa, d], vec![c, d, xb], vec![c, xb, pb]]);
        b.lv(&va, vec![pa, xa]);
        b.lv(&vb, vec![pb, xb]);
        meridians.push(Meridian::Real { xa, qe, xb, qw });
    }
    if sheets.is_empty() {
        b.l.extend([vec![c, pa], vec![c, pb]]);
    }
    while meridians.len() < 2 {
        let y = b.new_vertex(format!("meridian {e} #{}", meridians.len()));
        meridians.push(Meridian::Dummy(y));
    }
    for i in 0..meridians.len() {
        let next = &meridians[(i + 1) % meridians.len()];
        let mut cycle = meridians[i].east(pa, pb);
        let w = next.west(pa, pb);
        cycle.extend_from_slice(&w[1..w.len() - 1]);
        let z = b.new_vertex(format!("lune {e} #{i}"));
        sphere.extend(fan(z, &cycle));
    }
    b.ball(c, &sphere);
    sections
}

/// Ball around the barycentre of an X-triangle: the equator carries the
/// three tube discs in angular order with the corner points between them;
/// the hemispheres are fanned from the poles.
fn triangle_ball(b: &mut Builder, t: &Simplex, edges: &[Simplex; 3]) -> BTreeMap<Simplex, Section> {
    let c = b.new_vertex(format!("centre {t}"));
    let north = b.new_vertex(format!("north {t}"));
    let south = b.new_vertex(format!("south {t}"));
    let mut ids = Vec::new();
    let corner = |i: usize| edges[i].intersection(&edges[(i + 1) % 3]).expect("adjacent edges").vertices()[0].clone();
    for (i, e) in edges.iter().enumerate() {
        let d = b.new_vertex(format!("disc {t} edge {e}"));
        let xm = b.new_vertex(format!("disc {t} edge {e} west"));
        let xp = b.new_vertex(format!("disc {t} edge {e} east"));
        let qn = b.new_vertex(format!("disc {t} edge {e} north"));
        let qs = b.new_vertex(format!("disc {t} edge {e} south"));
        let r = b.new_vertex(format!("corner {t} at {}", corner(i)));
        ids.push([d, xm, xp, qn, qs, r]);
    }
    let mut sphere = Vec::new();
    let (mut ncyc, mut scyc) = (Vec::new(), Vec::new());
    let mut sections = BTreeMap::new();
    for i in 0..3 {
        let [d, xm, xp, qn, qs, r] = ids[i];
        let next_xm = ids[(i + 1) % 3][1];
        ncyc.extend([xm, qn, xp, r]);
        scyc.extend([xm, qs, xp, r]);
        sphere.extend([[d, xp, qn], [d, qn, xm], [d, xm, qs], [d, qs, xp]]);
        b.l.extend([vec![c, xm, d], vec![c, d, xp], vec![c, xp, r], vec![c, r, next_xm]]);
        let v = corner(i);
        b.lv(&v, vec![xp, r]);
        b.lv(&v, vec![r, next_xm]);
        // seen from outside the disc boundary runs xp → qn → xm → qs; the
        // tube's q2 is the one following pa
        let a = &edges[i].vertices()[0];
        let section = if edges[(i + 1) % 3].contains(a) { [d, xp, qs, xm, qn] } else { [d, xm, qn, xp, qs] };
        sections.insert(edges[i].clone(), section);
    }
    sphere.extend(fan(north, &ncyc));
    scyc.reverse();
    sphere.extend(fan(south, &scyc));
    b.ball(c, &sphere);
    sections
}

fn tube(b: &mut Builder, e: &Simplex, from: &Section, to: &Section) {
    for [i, j, k] in SECTION_TRIANGLES {
        b.tets.push(vec![from[i], from[j], from[k], to[k]]);
        b.tets.push(vec![from[i], from[j], to[j], to[k]]);
        b.tets.push(vec![from[i], to[i], to[j], to[k]]);
    }
    for u in [1, 3] {
        b.l.push(vec![from[0], from[u], to[u]]);
        b.l.push(vec![from[0], to[0], to[u]]);
    }
    let (va, vb) = (&e.vertices()[0], &e.vertices()[1]);
    b.lv(va, vec![from[1], to[1]]);
    b.lv(vb, vec![from[3], to[3]]);
}

/// Facts established while verifying `M`.
#[derive(Clone, Debug, Serialize)]
pub struct HandlebodyReport {
    pub tetrahedra: usize,
    pub spine_components: usize,
    pub spine_b1: i64,
    pub boundary_euler: i64,
    pub boundary_class: LinkClass,
    pub combinatorial_manifold: bool,
    pub orientable: bool,
    pub lv_match_links: bool,
}

#[derive(Clone, Debug)]
pub struct SpineThickening {
    pub m: Complex,
    /// Human-readable role of each vertex of `M`.
    pub roles: BTreeMap<Vertex, String>,
    pub boundary_surface: Complex,
    pub l: Complex,
    pub l_dot: Complex,
    pub lv: BTreeMap<Vertex, Complex>,
    /// `(v, e)` → vertex of `L_v` standing for the vertex `e` of `Lk_X(v)`.
    pub poles: BTreeMap<(Vertex, Simplex), Vertex>,
    pub report: HandlebodyReport,
}

pub fn build_spine_thickening<T: Scalar>(sd: &SheetData, se: &SpineEmbedding<T>) -> Result<SpineThickening> {
    let x = &se.base.domain;
    let mut b = Builder::default();
    let mut edge_sections = BTreeMap::new();
    for (e, sheets) in &sd.edge_sheets {
        edge_sections.insert(e.clone(), edge_ball(&mut b, e, sheets));
    }
    for (t, edges) in &sd.triangle_edges {
        let sections = triangle_ball(&mut b, t, edges);
        for (e, to) in sections {
            let from = edge_sections
                .get(&e)
                .and_then(|s| s.get(t))
                .ok_or_else(|| Error::verify(format!("sheet {t} missing at edge {e}")))?;
            tube(&mut b, &e, from, &to);
        }
    }

    let m = to_complex(&b.tets)?;
    let l = to_complex(&b.l)?;
    let lv: BTreeMap<Vertex, Complex> =
        b.lv.iter().map(|(v, s)| Ok((v.clone(), to_complex(s)?))).collect::<Result<_>>()?;
    let roles = b.roles.iter().enumerate().map(|(i, r)| (label(i), r.clone())).collect();
    let poles = b.poles.iter().map(|(k, &i)| (k.clone(), label(i))).collect();

    // a free edge of X gives a spine component, and M a ball, of its own
    let mut boundary_surface = Complex::empty();
    for part in m.components() {
        let mut rep = check_pseudomanifold(&part)?;
        if rep.dim != 3 || !rep.facet_degrees_ok {
            return Err(Error::verify(format!("M is not a 3-pseudomanifold (witness {:?})", rep.degree_witness)));
        }
        check_isolated_singularities(&part, &mut rep)?;
        if rep.combinatorial_manifold != Some(true) {
            return Err(Error::verify(format!("M is not a combinatorial manifold (witness {:?})", rep.link_witness)));
        }
        boundary_surface = boundary_surface.union(&rep.boundary);
    }
    let boundary_class = classify_link(&boundary_surface)?;
    let closed_orientable = |c: &LinkClass| match c {
        LinkClass::Sphere { dim: 2 } => true,
        LinkClass::ClosedSurface { orientable, .. } => *orientable,
        _ => false,
    };
    let ok = match &boundary_class {
        LinkClass::Disjoint { parts } => parts.iter().all(closed_orientable),
        c => closed_orientable(c),
    };
    let k = &se.spine;
    let spine_components = k.connected_components().len() as i64;
    if !ok || boundary_surface.connected_components().len() as i64 != spine_components {
        return Err(Error::verify(format!("boundary of M is {boundary_class:?}")));
    }
    let spine_b1 = k.simplices_of_dim(1).count() as i64 - k.simplices_of_dim(0).count() as i64 + spine_components;
    let boundary_euler = boundary_surface.euler_characteristic();
    if boundary_euler != 2 * spine_components - 2 * spine_b1 {
        return Err(Error::verify(format!("χ(∂M) = {boundary_euler} but b1(spine) = {spine_b1}")));
    }
    let orientable = orient(&m, &BTreeSet::new())?.is_ok();
    if !orientable {
        return Err(Error::verify("M is not orientable"));
    }

    let l_dot = l.filter(|s| boundary_surface.contains(s));
    let union = lv.values().fold(Complex::empty(), |acc, c| acc.union(c));
    if union != l_dot {
        return Err(Error::verify("L ∩ ∂M differs from the union of the link curves"));
    }
    let mut seen = BTreeSet::new();
    for c in lv.values() {
        for v in c.vertices() {
            if !seen.insert(v.clone()) {
                return Err(Error::verify(format!("link curves meet at {v}")));
            }
        }
    }
    for v in x.vertices() {
        let curve = lv.get(&v).ok_or_else(|| Error::verify(format!("no link curve for {v}")))?;
        let expected = x.link(&Simplex::point(v.clone()))?;
        if !is_subdivided_copy(curve, &expected, &v, &poles) {
            return Err(Error::verify(format!("link curve of {v} is not a subdivision of its link")));
        }
    }

    let report = HandlebodyReport {
        tetrahedra: m.simplices_of_dim(3).count(),
        spine_components: spine_components as usize,
        spine_b1,
        boundary_euler,
        boundary_class,
        combinatorial_manifold: true,
        orientable,
        lv_match_links: true,
    };
    Ok(SpineThickening { m, roles, boundary_surface, l, l_dot, lv, poles, report })
}

/// Checks that the graph `curve` becomes `link` after smoothing all
/// degree-2 vertices other than the poles, with the pole of `e` standing for
/// the vertex `e ∖ v` of the link.
pub fn is_subdivided_copy(
    curve: &Complex,
    link: &Complex,
    v: &Vertex,
    poles: &BTreeMap<(Vertex, Simplex), Vertex>,
) -> bool {
    let mut kept: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for ((pv, e), p) in poles {
        if pv == v {
            match e.without(v) {
                Some(u) => kept.insert(p.clone(), u.vertices()[0].clone()),
                None => return false,
            };
        }
    }
    let adj = curve.adjacency();
    if curve.dim() > 1 || kept.keys().any(|p| !adj.contains_key(p)) {
        return false;
    }
    if adj.iter().any(|(u, n)| !kept.contains_key(u) && n.len() != 2) {
        return false;
    }
    let mut edges = BTreeSet::new();
    let mut visited: BTreeSet<Vertex> = kept.keys().cloned().collect();
    for (p, image) in &kept {
        for first in &adj[p] {
            let (mut prev, mut cur) = (p.clone(), first.clone());
            while !kept.contains_key(&cur) {
                visited.insert(cur.clone());
                let next = adj[&cur].iter().find(|&n| *n != prev).expect("degree two").clone();
                prev = std::mem::replace(&mut cur, next);
            }
            if cur == *p {
                return false;
            }
            let mut pair = [image.clone(), kept[&cur].clone()];
            pair.sort();
            edges.insert(pair);
        }
    }
    if visited.len() != adj.len() {
        // a closed loop of smoothed vertices
        return false;
    }
    let want: BTreeSet<[Vertex; 2]> =
        link.simplices_of_dim(1).map(|s| [s.vertices()[0].clone(), s.vertices()[1].clone()]).collect();
    let points: BTreeSet<Vertex> = link.vertices().into_iter().collect();
    let images: BTreeSet<Vertex> = kept.values().cloned().collect();
    link.dim() <= 1 && edges == want && points == images
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{choose_spine_barycenters, epsilon_neighborhood_embedding, sample_general_position_map};
    use crate::thicken::sheets::extract_sheet_data;
    use crate::Rational;

    pub(crate) fn thicken_spine(name: &str, seed: u64) -> SpineThickening {
        let x = fixtures::fixture(name).unwrap();
        let m = sample_general_position_map::<Rational>(&x, 3, seed, 16).unwrap();
        let se = epsilon_neighborhood_embedding(choose_spine_barycenters(&m, seed).unwrap()).unwrap();
        let sd = extract_sheet_data(&se).unwrap();
        build_spine_thickening(&sd, &se).unwrap()
    }

    #[test]
    fn triangle_gives_a_ball() {
        let t = thicken_spine("triangle", 0);
        assert_eq!(t.report.spine_b1, 0);
        assert_eq!(t.report.boundary_class, LinkClass::Sphere { dim: 2 });
        assert_eq!(t.lv.len(), 3);
    }

    #[test]
    fn tetrahedron_boundary_gives_genus_three() {
        let t = thicken_spine("tetrahedron-boundary", 2);
        assert_eq!(t.report.boundary_euler, -4);
        assert_eq!(t.report.boundary_class, LinkClass::ClosedSurface { genus: 3, orientable: true, components: 1 });
        for c in t.lv.values() {
            assert_eq!(classify_link(c).unwrap(), LinkClass::Circle { components: 1 });
        }
    }

    #[test]
    fn two_triangles_on_an_edge() {
        let t = thicken_spine("two-triangles-edge", 1);
        assert_eq!(t.report.boundary_class, LinkClass::Sphere { dim: 2 });
        let arcs = t.l_dot.connected_components().len();
        assert_eq!(arcs, 4);
    }

    #[test]
    fn wedge_keeps_the_free_edge() {
        let t = thicken_spine("wedge", 0);
        let d = t.lv.iter().find(|(v, _)| &***v == "d").unwrap().1;
        assert_eq!(d.len(), 1);
        // an arc for the triangle plus an isolated point for the free edge
        assert_eq!(t.lv[&vertex("c")].connected_components().len(), 2);
    }

    #[test]
    fn smoothing_detects_wrong_curves() {
        let poles: BTreeMap<(Vertex, Simplex), Vertex> = [
            ((vertex("v"), Simplex::new(["a", "v"]).unwrap()), vertex("p")),
            ((vertex("v"), Simplex::new(["b", "v"]).unwrap()), vertex("q")),
        ]
        .into_iter()
        .collect();
        let link = crate::complex::complex_from(&[&["a", "b"]]);
        let good = crate::complex::complex_from(&[&["p", "s"], &["s", "q"]]);
        assert!(is_subdivided_copy(&good, &link, &vertex("v"), &poles));
        let extra = crate::complex::complex_from(&[&["p", "s"], &["s", "q"], &["x", "y"], &["y", "z"], &["x", "z"]]);
        assert!(!is_subdivided_copy(&extra, &link, &vertex("v"), &poles));
        let apart = crate::complex::complex_from(&[&["p"], &["q"]]);
        assert!(!is_subdivided_copy(&apart, &link, &vertex("v"), &poles));
    }
}
