//! Regular neighbourhoods of the link curves on `∂M`, coned off.

use std::collections::{BTreeMap, BTreeSet};

use super::assemble::SpineThickening;
use crate::complex::{relative_barycentric_subdivision, simplicial_neighborhood};
use crate::complex::{vertex, Complex, Simplex, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(tag = "part", content = "vertex")]
pub enum Provenance {
    M,
    Cone(Vertex),
}

#[derive(Clone, Debug)]
pub struct ThickeningOutput {
    pub spine: SpineThickening,
    /// `M` subdivided near the link curves.
    pub m1: Complex,
    pub boundary1: Complex,
    pub nv: BTreeMap<Vertex, Complex>,
    pub cone_vertices: BTreeMap<Vertex, Vertex>,
    pub p: Complex,
    pub x_copy: Complex,
    /// Relative subdivisions needed before the `N_v` came out disjoint.
    pub subdivisions: usize,
}

impl ThickeningOutput {
    pub fn cone_vertex_set(&self) -> BTreeSet<Vertex> {
        self.cone_vertices.values().cloned().collect()
    }

    /// Which part of `P` a simplex of `P` comes from.
    pub fn provenance(&self, s: &Simplex) -> Option<Provenance> {
        if !self.p.contains(s) {
            return None;
        }
        for (v, w) in &self.cone_vertices {
            if s.contains(w) {
                return Some(Provenance::Cone(v.clone()));
            }
        }
        Some(Provenance::M)
    }
}

pub fn cone_vertex_label(v: &Vertex) -> Vertex {
    vertex(&format!("w:{v}"))
}

/// Subdivides every simplex of `m` that touches the link curves, except the
/// simplices of `L` itself, and returns the subdivision with its boundary.
fn subdivide_near_curves(
    m: &Complex,
    boundary: &Complex,
    l: &Complex,
    curve_vertices: &BTreeSet<Vertex>,
) -> Result<(Complex, Complex)> {
    let away = m.filter(|s| s.vertices().iter().all(|v| !curve_vertices.contains(v)));
    let keep = away.union(l);
    let sub = relative_barycentric_subdivision(m, &keep)?;
    let boundary1 = sub.child.filter(|s| sub.carrier(s).is_some_and(|c| boundary.contains(&c)));
    Ok((sub.child, boundary1))
}

fn pairwise_disjoint(nv: &BTreeMap<Vertex, Complex>) -> bool {
    let mut seen = BTreeSet::new();
    nv.values().all(|n| n.vertices().into_iter().all(|v| seen.insert(v)))
}

pub fn cone_boundary_neighborhoods(t: SpineThickening) -> Result<ThickeningOutput> {
    let curve_vertices: BTreeSet<Vertex> = t.l_dot.vertices().into_iter().collect();
    let mut m1 = t.m.clone();
    let mut boundary1 = t.boundary_surface.clone();
    let mut subdivisions = 0;
    let nv = loop {
        if subdivisions == 2 {
            return Err(Error::verify("neighbourhoods of the link curves still overlap"));
        }
        (m1, boundary1) = subdivide_near_curves(&m1, &boundary1, &t.l, &curve_vertices)?;
        subdivisions += 1;
        let mut nv = BTreeMap::new();
        for (v, curve) in &t.lv {
            nv.insert(v.clone(), simplicial_neighborhood(&boundary1, curve)?.n);
        }
        if pairwise_disjoint(&nv) {
            break nv;
        }
    };
    let mut p = m1.clone();
    let mut x_copy = t.l.clone();
    let mut cone_vertices = BTreeMap::new();
    for (v, n) in &nv {
        let w = cone_vertex_label(v);
        p = p.cone_off(n, &w)?;
        x_copy = x_copy.cone_off(&t.lv[v], &w)?;
        cone_vertices.insert(v.clone(), w);
    }
    Ok(ThickeningOutput { spine: t, m1, boundary1, nv, cone_vertices, p, x_copy, subdivisions })
}
