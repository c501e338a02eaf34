//! Thickening a 2-complex `X` into an orientable 3-pseudomanifold `P(X)`
//! with boundary that deformation retracts onto `X`.

mod assemble;
mod cone;
mod sheets;
mod verify;

pub use assemble::{build_spine_thickening, is_subdivided_copy, HandlebodyReport, SpineThickening};
pub use cone::{cone_boundary_neighborhoods, cone_vertex_label, Provenance, ThickeningOutput};
pub use sheets::{extract_sheet_data, LinkGraph, SheetData};
pub use verify::{verify_thickening, ThickeningReport};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::geometry::SpineEmbedding;
use crate::scalar::Scalar;

/// Inputs must be connected 2-complexes without isolated vertices. Graphs
/// are rejected: a graph does not in general thicken to a 1-dimensional
/// pseudomanifold.
pub fn require_thickenable(x: &Complex) -> Result<()> {
    if x.dim() != 2 {
        return Err(Error::Dimension { what: "thickening needs a 2-complex", found: x.dim() });
    }
    if !x.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(v) = x.maximal_simplices().into_iter().find(|s| s.len() == 1) {
        return Err(Error::Dimension { what: "isolated vertex in thickening input", found: v.dim() as isize });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Thickening {
    pub sheets: SheetData,
    pub output: ThickeningOutput,
    pub report: ThickeningReport,
}

/// Runs every thickening stage on an embedded spine neighbourhood and
/// fails unless all verifications pass.
pub fn thicken<T: Scalar>(se: &SpineEmbedding<T>) -> Result<Thickening> {
    let x = &se.base.domain;
    require_thickenable(x)?;
    let sheets = extract_sheet_data(se)?;
    let spine = build_spine_thickening(&sheets, se)?;
    let output = cone_boundary_neighborhoods(spine)?;
    let report = verify_thickening(&output, x)?;
    if !report.passed() {
        return Err(Error::verify(format!("thickening checks failed: {}", report.failures().join("; "))));
    }
    Ok(Thickening { sheets, output, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{choose_spine_barycenters, epsilon_neighborhood_embedding, sample_general_position_map};
    use crate::pseudomanifold::LinkClass;
    use crate::Rational;
    use num_bigint::BigInt;

    fn run(name: &str, seed: u64) -> Thickening {
        let x = fixtures::fixture(name).unwrap();
        let m = sample_general_position_map::<Rational>(&x, 3, seed, 16).unwrap();
        let se = epsilon_neighborhood_embedding(choose_spine_barycenters(&m, seed).unwrap()).unwrap();
        thicken(&se).unwrap()
    }

    #[test]
    fn triangle_thickens_to_a_ball() {
        let t = run("triangle", 0);
        assert_eq!(t.report.homology_p.betti(), vec![1, 0, 0, 0]);
        assert_eq!(t.output.nv.len(), 3);
        for n in t.output.nv.values() {
            assert_eq!(crate::pseudomanifold::classify_link(n).unwrap(), LinkClass::Disc { dim: 2 });
        }
        assert_eq!(t.report.p.combinatorial_manifold, Some(true));
    }

    #[test]
    fn tetrahedron_boundary_has_annulus_cone_links() {
        let t = run("tetrahedron-boundary", 0);
        assert_eq!(t.report.homology_p.betti(), vec![1, 0, 1, 0]);
        let annulus =
            LinkClass::SurfaceWithBoundary { genus: 0, orientable: true, boundary_components: 2, components: 1 };
        assert_eq!(t.report.cone_vertex_links.len(), 4);
        assert!(t.report.cone_vertex_links.values().all(|c| *c == annulus));
    }

    #[test]
    fn projective_plane_thickens_orientably() {
        let t = run("projective-plane-6", 1);
        assert!(t.report.orientable);
        assert_eq!(t.report.homology_p.betti(), vec![1, 0, 0, 0]);
        assert_eq!(t.report.homology_p.torsion(1), &[BigInt::from(2)]);
    }

    #[test]
    fn wedge_and_graphs() {
        let t = run("wedge", 2);
        // the free edge's ball meets the rest of P only at a cone vertex
        assert_eq!(t.report.p.gallery_components, 2);
        assert_eq!(t.report.top_relative_betti, 2);
        let d = &t.output.nv[&crate::complex::vertex("d")];
        assert_eq!(crate::pseudomanifold::classify_link(d).unwrap(), LinkClass::Disc { dim: 2 });
        let edge = fixtures::fixture("edge").unwrap();
        assert!(matches!(require_thickenable(&edge), Err(Error::Dimension { .. })));
    }

    #[test]
    fn provenance_splits_p() {
        let t = run("two-triangles-edge", 0);
        let o = &t.output;
        let mut cones = 0;
        for s in o.p.iter() {
            match o.provenance(s).unwrap() {
                Provenance::M => assert!(o.m1.contains(s)),
                Provenance::Cone(v) => {
                    cones += 1;
                    assert!(s.contains(&o.cone_vertices[&v]));
                }
            }
        }
        assert!(cones > 0);
        assert_eq!(o.p.len(), o.m1.len() + cones);
    }
}
