use std::collections::BTreeMap;

use serde::Serialize;

use super::assemble::HandlebodyReport;
use super::cone::ThickeningOutput;
use crate::complex::greedy_collapse;
use crate::complex::Complex;
use crate::error::Result;
use crate::homology::{homology_groups, HomologyResult};
use crate::pseudomanifold::{full_report, top_relative_betti, LinkClass, PseudomanifoldReport};

/// Seeds tried before greedy collapsing of `M` is declared stuck.
const COLLAPSE_SEEDS: u64 = 8;

#[derive(Clone, Debug, Serialize)]
pub struct ThickeningReport {
    pub handlebody: HandlebodyReport,
    pub subdivisions: usize,
    pub p_f_vector: Vec<usize>,
    pub p: PseudomanifoldReport,
    pub orientable: bool,
    pub top_relative_betti: usize,
    pub cone_vertex_links: BTreeMap<String, LinkClass>,
    pub homology_x: HomologyResult,
    pub homology_p: HomologyResult,
    pub homology_x_copy: HomologyResult,
    pub x_copy_in_p: bool,
    pub collapsed_dim: isize,
    pub collapsed_b1: usize,
    pub checks: Vec<(String, bool)>,
}

impl ThickeningReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }
}

fn collapse_to_graph(m: &Complex) -> Complex {
    let mut best = greedy_collapse(m, 0);
    for seed in 1..COLLAPSE_SEEDS {
        if best.dim() <= 1 {
            break;
        }
        let c = greedy_collapse(m, seed);
        if c.dim() < best.dim() || (c.dim() == best.dim() && c.len() < best.len()) {
            best = c;
        }
    }
    best
}

pub fn verify_thickening(t: &ThickeningOutput, x: &Complex) -> Result<ThickeningReport> {
    let cones = t.cone_vertex_set();
    let spine_components = t.spine.report.spine_components;
    let (p_report, orientation) = full_report(&t.p, &cones)?;
    let orientable = orientation.is_ok();
    let top = top_relative_betti(&t.p, &p_report)?;
    let homology_x = homology_groups(x, None)?;
    let homology_p = homology_groups(&t.p, None)?;
    let homology_x_copy = homology_groups(&t.x_copy, None)?;
    let x_copy_in_p = t.x_copy.is_subcomplex_of(&t.p);
    let collapsed = collapse_to_graph(&t.spine.m);
    let collapsed_b1 = homology_groups(&collapsed, None)?.betti().get(1).copied().unwrap_or(0);
    let cone_vertex_links = t
        .cone_vertices
        .values()
        .filter_map(|w| p_report.vertex_links.get(&**w).map(|c| (w.to_string(), c.clone())))
        .collect();

    let checks = vec![
        ("P is a pure 3-pseudomanifold".to_string(), p_report.dim == 3 && p_report.facet_degrees_ok),
        ("P has isolated singularities".to_string(), p_report.isolated_singularities == Some(true)),
        // one gallery component per spine component (X without free edges
        // has a connected spine)
        (
            "P has one gallery component per spine component".to_string(),
            p_report.gallery_components == spine_components,
        ),
        ("P is orientable by the cone rule".to_string(), orientable),
        ("rank H3(P, ∂P) counts the gallery components".to_string(), top == spine_components),
        ("the copy of X lies in P".to_string(), x_copy_in_p),
        ("the copy of X has the homology of X".to_string(), homology_x_copy.same_groups(&homology_x)),
        ("P has the homology of X".to_string(), homology_p.same_groups(&homology_x)),
        (
            "M collapses to a graph with the spine's b1".to_string(),
            collapsed.dim() <= 1 && collapsed_b1 as i64 == t.spine.report.spine_b1,
        ),
    ];
    Ok(ThickeningReport {
        handlebody: t.spine.report.clone(),
        subdivisions: t.subdivisions,
        p_f_vector: t.p.f_vector(),
        p: p_report,
        orientable,
        top_relative_betti: top,
        cone_vertex_links,
        homology_x,
        homology_p,
        homology_x_copy,
        x_copy_in_p,
        collapsed_dim: collapsed.dim(),
        collapsed_b1,
        checks,
    })
}
