//! Exact local embedding data around the spine: which sheets of `N_ε`
//! meet at each spine vertex and in which cyclic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{Simplex, Vertex};
use crate::error::{Error, Result};
use crate::geometry::{Point, SpineEmbedding};
use crate::scalar::Scalar;

/// Link graph of a spine vertex with the rotation system induced by the
/// embedding (neighbours listed counter-clockwise as seen from outside a
/// small sphere around the vertex).
#[derive(Clone, Debug, Serialize)]
pub struct LinkGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub rotation: Vec<Vec<usize>>,
    pub faces: usize,
    pub planar: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SheetData {
    /// X-edge → triangles containing it, counter-clockwise around the
    /// image of the edge oriented from its larger towards its smaller vertex.
    pub edge_sheets: BTreeMap<Simplex, Vec<Simplex>>,
    /// X-triangle → its edges counter-clockwise around the normal
    /// `(f(b) − f(a)) × (f(c) − f(a))`; consecutive edges meet at a corner.
    pub triangle_edges: BTreeMap<Simplex, [Simplex; 3]>,
    /// Spine edge → the sheets carrying it (always exactly one for d = 2).
    pub spine_edge_sheets: BTreeMap<Simplex, Vec<Simplex>>,
    /// Spine vertex → its link graph in `N_ε`.
    pub link_graphs: BTreeMap<Vertex, LinkGraph>,
}

impl SheetData {
    pub fn is_planar(&self) -> bool {
        self.link_graphs.values().all(|g| g.planar)
    }
}

/// `(x, y)` coordinates of `g` in the plane orthogonal to `axis`, using the
/// projection of `reference` as the x direction. Both coordinates carry the
/// same positive scale factor, so angular comparisons are exact.
fn plane_coords<T: Scalar>(axis: &Point<T>, reference: &Point<T>, g: &Point<T>) -> (T, T) {
    let zz = axis.norm_sq();
    let u = reference.scale(&zz).sub(&axis.scale(&axis.dot(reference)));
    let w = axis.cross(reference);
    (g.dot(&u), g.dot(&w))
}

fn half<T: Scalar>(p: &(T, T)) -> u8 {
    let zero = T::zero();
    if p.1 > zero || (p.1 == zero && p.0 > zero) {
        0
    } else {
        1
    }
}

/// Sorts `items` counter-clockwise (seen from the tip of `axis`) by the
/// direction of their vectors. Fails on a vector parallel to the axis or on
/// two equal directions.
fn angular_sort<T: Scalar, K: Clone>(axis: &Point<T>, items: &[(K, Point<T>)]) -> Result<Vec<K>> {
    let zero = T::zero();
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let mut reference = None;
    for (_, g) in items {
        if !axis.cross(g).norm_sq().is_zero() {
            reference = Some(g.clone());
            break;
        }
    }
    let reference = reference.ok_or_else(|| Error::GeneralPosition("sheet parallel to its spine axis".into()))?;
    let mut keyed = Vec::with_capacity(items.len());
    for (k, g) in items {
        let c = plane_coords(axis, &reference, g);
        if c.0 == zero && c.1 == zero {
            return Err(Error::GeneralPosition("sheet parallel to its spine axis".into()));
        }
        keyed.push((half(&c), c, k.clone()));
    }
    let cmp = |a: &(u8, (T, T), K), b: &(u8, (T, T), K)| -> Ordering {
        a.0.cmp(&b.0).then_with(|| {
            let cross = a.1 .0.clone() * b.1 .1.clone() - a.1 .1.clone() * b.1 .0.clone();
            if cross > zero {
                Ordering::Less
            } else if cross < zero {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    };
    keyed.sort_by(cmp);
    for w in keyed.windows(2) {
        if cmp(&w[0], &w[1]) == Ordering::Equal {
            return Err(Error::GeneralPosition("two sheets leave the spine in the same direction".into()));
        }
    }
    Ok(keyed.into_iter().map(|(_, _, k)| k).collect())
}

/// Counts faces of a rotation system and checks `V − E + F = 2` on every
/// component.
fn trace_faces(n: usize, edges: &[(usize, usize)], rotation: &[Vec<usize>]) -> (usize, bool) {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra] = rb;
    }
    let mut seen = std::collections::HashSet::new();
    let mut faces_of: BTreeMap<usize, i64> = BTreeMap::new();
    for &(a, b) in edges {
        for start in [(a, b), (b, a)] {
            if seen.contains(&start) {
                continue;
            }
            let root = find(&mut comp, start.0);
            *faces_of.entry(root).or_default() += 1;
            let mut d = start;
            loop {
                seen.insert(d);
                let (u, v) = d;
                let rot = &rotation[v];
                let i = rot.iter().position(|&x| x == u).expect("rotation lists every neighbour");
                d = (v, rot[(i + 1) % rot.len()]);
                if d == start {
                    break;
                }
            }
        }
    }
    let mut ve: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut comp, i);
        ve.entry(r).or_default().0 += 1;
    }
    for &(a, _) in edges {
        let r = find(&mut comp, a);
        ve.entry(r).or_default().1 += 1;
    }
    let mut total = 0usize;
    let mut planar = true;
    for (r, (v, e)) in ve {
        // an isolated vertex bounds one face
        let f = faces_of.get(&r).copied().unwrap_or(1);
        total += f as usize;
        planar &= v - e + f == 2;
    }
    (total, planar)
}

fn graph(vertices: Vec<String>, rotation: Vec<Vec<usize>>) -> LinkGraph {
    let mut edges = Vec::new();
    for (u, nb) in rotation.iter().enumerate() {
        for &v in nb {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    let (faces, planar) = trace_faces(vertices.len(), &edges, &rotation);
    LinkGraph { vertices, edges, rotation, faces, planar }
}

pub fn extract_sheet_data<T: Scalar>(se: &SpineEmbedding<T>) -> Result<SheetData> {
    let x = &se.base.domain;
    if x.dim() != 2 {
        return Err(Error::Dimension { what: "sheet data needs a 2-complex", found: x.dim() });
    }
    if se.nbhd.is_none() {
        return Err(Error::verify("sheet data needs the embedded ε-neighbourhood"));
    }
    let f = &se.subdivided;
    let bary = |s: &Simplex| -> Result<&Point<T>> {
        let v = se.subdivision.barycenter_of(s).ok_or_else(|| Error::verify(format!("no barycentre for {s}")))?;
        Ok(f.point(v))
    };
    let idx = x.index();

    let mut edge_sheets = BTreeMap::new();
    let mut link_graphs = BTreeMap::new();
    for e in x.simplices_of_dim(1) {
        let (a, b) = (&e.vertices()[0], &e.vertices()[1]);
        let axis = f.point(a).sub(f.point(b));
        let ve = bary(e)?;
        let mut items = Vec::new();
        for t in idx.cofaces(e).into_iter().filter(|t| t.len() == 3) {
            items.push((t.clone(), bary(t)?.sub(ve)));
        }
        let order = angular_sort(&axis, &items)?;
        // link graph: 0 = towards a, 1 = towards b, 2.. = sheets
        let mut names = vec![a.to_string(), b.to_string()];
        names.extend(order.iter().map(|t| t.to_string()));
        let m = order.len();
        let mut rotation = vec![(2..2 + m).collect::<Vec<_>>(), (2..2 + m).rev().collect()];
        rotation.extend((0..m).map(|_| vec![0, 1]));
        let g = graph(names, rotation);
        link_graphs.insert(se.subdivision.barycenter_of(e).expect("checked").clone(), g);
        edge_sheets.insert(e.clone(), order);
    }

    let mut triangle_edges = BTreeMap::new();
    let mut spine_edge_sheets = BTreeMap::new();
    for t in x.simplices_of_dim(2) {
        let p: Vec<&Point<T>> = t.vertices().iter().map(|v| f.point(v)).collect();
        let normal = p[1].sub(p[0]).cross(&p[2].sub(p[0]));
        let vt = bary(t)?;
        let mut items = Vec::new();
        for e in t.facets() {
            items.push((e.clone(), bary(&e)?.sub(vt)));
        }
        let order = angular_sort(&normal, &items)?;
        let order: [Simplex; 3] = order.try_into().map_err(|_| Error::verify("triangle without three edges"))?;
        for i in 0..3 {
            if order[i].intersection(&order[(i + 1) % 3]).map(|c| c.len()) != Some(1) {
                return Err(Error::verify(format!("edges of {t} out of order")));
            }
        }
        // hexagon: edge i, then the corner it shares with edge i + 1
        let mut names = Vec::new();
        for i in 0..3 {
            names.push(order[i].to_string());
            names.push(order[i].intersection(&order[(i + 1) % 3]).expect("checked").to_string());
        }
        let rotation = (0..6).map(|i| vec![(i + 5) % 6, (i + 1) % 6]).collect();
        let vt_label = se.subdivision.barycenter_of(t).expect("checked").clone();
        link_graphs.insert(vt_label.clone(), graph(names, rotation));
        for e in &order {
            let ve = se.subdivision.barycenter_of(e).expect("checked").clone();
            let s = Simplex::from_vertices(vec![ve, vt_label.clone()])?;
            spine_edge_sheets.insert(s, vec![t.clone()]);
        }
        triangle_edges.insert(t.clone(), order);
    }

    let sd = SheetData { edge_sheets, triangle_edges, spine_edge_sheets, link_graphs };
    if !sd.is_planar() {
        return Err(Error::verify("a spine vertex link graph failed the planarity check"));
    }
    Ok(sd)
}
