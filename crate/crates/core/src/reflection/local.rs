//! Links in the closed-up complex, computed one chamber vertex at a time.
//!
//! The vertex `v_τ` of `Y = B(P′)` has link `B(∂τ) ∗ B(Lk τ)` in `Y`; in
//! the closed-up complex it becomes the basic construction of that join
//! over `(Z/2)^{S(v_τ)}`, which has at most `2^{dim P + 1}` chambers.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{boundary_mirror_structure, BoundaryMirrors};
use crate::complex::{barycentric_subdivision, vertex, Complex, Incidence, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::pseudomanifold::{classify_link, LinkClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalKind {
    Interior,
    Boundary,
    Cone,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalLink {
    pub simplex: Simplex,
    pub kind: LocalKind,
    pub mirror_rank: usize,
    pub class: LinkClass,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalReport {
    pub dim: isize,
    pub subdivided: bool,
    pub mirrors: usize,
    pub classes_checked: usize,
    /// Link class of every vertex of `P′` in the closed-up complex.
    pub vertex_links: BTreeMap<String, LinkClass>,
    /// `(kind, class)` → number of chamber vertices of that type.
    pub counts: BTreeMap<String, usize>,
    pub failures: Vec<LocalLink>,
    pub all_closed_manifolds: bool,
}

/// Join of the face part and the coface part of the link of `v_τ`, with the
/// mirror mask of every vertex (bit `i` = the `i`-th vertex of `τ`).
fn chamber_link(bm: &BoundaryMirrors, idx: &Incidence<'_>, tau: &Simplex) -> (Vec<Simplex>, BTreeMap<Vertex, u64>) {
    let full: u64 = (1 << tau.len()) - 1;
    let mut mask = BTreeMap::new();
    let faces = Complex::from_simplices(tau.proper_faces());
    let bf = barycentric_subdivision(&faces);
    for (rho, v) in &bf.barycenter {
        let m = rho.vertices().iter().map(|u| 1u64 << tau.position(u).expect("face of τ")).sum();
        mask.insert(v.clone(), m);
    }
    let lk = idx.link(tau);
    let bl = barycentric_subdivision(&lk);
    for (lambda, v) in &bl.barycenter {
        let m = if bm.boundary.contains(&lambda.union(tau)) { full } else { 0 };
        mask.insert(v.clone(), m);
    }
    let a = bf.child.maximal_simplices();
    let b = bl.child.maximal_simplices();
    let joined = match (a.is_empty(), b.is_empty()) {
        (true, _) => b,
        (_, true) => a,
        _ => a.iter().flat_map(|x| b.iter().map(move |y| x.union(y))).collect(),
    };
    (joined, mask)
}

/// The link of `v_τ` in the closed-up complex, materialized locally.
pub fn local_link(bm: &BoundaryMirrors, idx: &Incidence<'_>, tau: &Simplex) -> Complex {
    let (join, mask) = chamber_link(bm, idx, tau);
    let rank = bm.sof(tau).len();
    let mut out = Vec::with_capacity(join.len() << rank);
    for w in 0u64..(1 << rank) {
        for s in &join {
            let vs = s.vertices().iter().map(|y| vertex(&format!("{y}@{:x}", w & !mask[y]))).collect();
            out.push(Simplex::from_vertices(vs).expect("distinct join vertices"));
        }
    }
    Complex::from_simplices(out)
}

fn classify(bm: &BoundaryMirrors, idx: &Incidence<'_>, tau: &Simplex, cones: &BTreeSet<Vertex>) -> Result<LocalLink> {
    let n = bm.chamber.dim().max(1) as usize;
    let rank = bm.sof(tau).len();
    let kind = if tau.len() == 1 && cones.contains(&tau.vertices()[0]) {
        LocalKind::Cone
    } else if rank > 0 {
        LocalKind::Boundary
    } else {
        LocalKind::Interior
    };
    let class = if kind == LocalKind::Interior && tau.len() > 1 {
        // B(∂τ) ∗ B(Lk τ) is a sphere exactly when Lk τ is one
        let lk = classify_link(&idx.link(tau))?;
        let sphere = match n.checked_sub(tau.len()) {
            Some(want) => lk.is_sphere(want),
            None => lk == LinkClass::Empty,
        };
        if sphere {
            LinkClass::sphere(n - 1)
        } else {
            LinkClass::NotManifold { witness: format!("Lk {tau} is {lk:?}") }
        }
    } else {
        classify_link(&local_link(bm, idx, tau))?
    };
    let ok = match kind {
        LocalKind::Cone => class.is_closed_manifold(),
        _ => class.is_sphere(n - 1),
    };
    Ok(LocalLink { simplex: tau.clone(), kind, mirror_rank: rank, class, ok })
}

/// The link of `v_τ` in the closed-up complex for every simplex `τ` of the
/// chamber, in the chamber's simplex order.
pub fn local_links(bm: &BoundaryMirrors, cones: &BTreeSet<Vertex>) -> Result<Vec<LocalLink>> {
    let idx = bm.chamber.index();
    let taus: Vec<&Simplex> = bm.chamber.iter().collect();
    taus.par_iter().map(|t| classify(bm, &idx, t, cones)).collect()
}

/// Checks that closing `p` up would give a pseudomanifold whose vertex
/// links are closed manifolds (spheres away from the cone vertices),
/// without building the closed-up complex.
pub fn verify_closed_locally(p: &Complex, cones: &BTreeSet<Vertex>) -> Result<LocalReport> {
    let bm = boundary_mirror_structure(p)?;
    if bm.chamber.dim() > 3 {
        return Err(Error::Dimension { what: "local verification needs dim <= 3", found: bm.chamber.dim() });
    }
    let links = local_links(&bm, cones)?;
    let classes_checked = links.len();
    let mut counts = BTreeMap::new();
    let mut vertex_links = BTreeMap::new();
    let mut failures = Vec::new();
    for l in links {
        let kind = serde_json::to_value(l.kind).expect("plain enum");
        let class = serde_json::to_string(&l.class).expect("plain enum");
        *counts.entry(format!("{} {class}", kind.as_str().unwrap_or("?"))).or_insert(0) += 1;
        if l.simplex.len() == 1 {
            vertex_links.insert(l.simplex.vertices()[0].to_string(), l.class.clone());
        }
        if !l.ok {
            failures.push(l);
        }
    }
    Ok(LocalReport {
        dim: bm.chamber.dim(),
        subdivided: bm.subdivided,
        mirrors: bm.s.len(),
        classes_checked,
        vertex_links,
        counts,
        all_closed_manifolds: failures.is_empty(),
        failures,
    })
}
