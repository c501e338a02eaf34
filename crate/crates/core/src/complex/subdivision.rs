//! Barycentric and relative barycentric subdivisions, spines, and
//! simplicial/regular neighborhoods.
//!
//! Barycenters carry canonical chain labels (see [`Simplex::chain_label`]),
//! so statements about subdivided complexes can be checked by set equality
//! of labelled simplices.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{Complex, Simplex, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SubdivisionMap {
    pub child: Complex,
    /// Parent simplex to the child vertex representing it. Parent vertices
    /// (and untouched subcomplex vertices) map to themselves.
    pub barycenter: BTreeMap<Simplex, Vertex>,
    /// Inverse of `barycenter`.
    pub parent: BTreeMap<Vertex, Simplex>,
}

impl SubdivisionMap {
    /// Smallest parent simplex containing the child simplex.
    pub fn carrier(&self, child: &Simplex) -> Option<Simplex> {
        let mut acc: Option<Simplex> = None;
        for v in child.vertices() {
            let p = self.parent.get(v)?;
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => a.union(p),
            });
        }
        acc
    }

    pub fn barycenter_of(&self, parent: &Simplex) -> Option<&Vertex> {
        self.barycenter.get(parent)
    }
}

pub fn barycentric_subdivision(x: &Complex) -> SubdivisionMap {
    relative_barycentric_subdivision(x, &Complex::empty()).expect("chain labels collide with input vertex labels")
}

/// Subdivides every simplex of `x` not contained in `k`, leaving `k`
/// untouched.
pub fn relative_barycentric_subdivision(x: &Complex, k: &Complex) -> Result<SubdivisionMap> {
    k.require_subcomplex_of(x)?;
    let mut barycenter = BTreeMap::new();
    let mut parent = BTreeMap::new();
    for s in x.iter() {
        let label = if k.contains(s) {
            if s.len() > 1 {
                continue;
            }
            s.vertices()[0].clone()
        } else {
            s.chain_label()
        };
        barycenter.insert(s.clone(), label.clone());
        // an input vertex may already carry a chain label
        if parent.insert(label.clone(), s.clone()).is_some() {
            return Err(Error::VertexExists(label.to_string()));
        }
    }

    let mut out: BTreeSet<Simplex> = BTreeSet::new();
    let mut chain: Vec<Vertex> = Vec::new();
    for sigma in x.maximal_simplices() {
        if k.contains(&sigma) {
            out.insert(sigma);
            continue;
        }
        chain.clear();
        descend(&sigma, k, &barycenter, &mut chain, &mut out);
    }
    let child = Complex::from_simplices(out);
    Ok(SubdivisionMap { child, barycenter, parent })
}

fn descend(
    bottom: &Simplex,
    k: &Complex,
    barycenter: &BTreeMap<Simplex, Vertex>,
    chain: &mut Vec<Vertex>,
    out: &mut BTreeSet<Simplex>,
) {
    chain.push(barycenter[bottom].clone());
    let in_k: Vec<Simplex> = bottom.proper_faces().into_iter().filter(|f| k.contains(f)).collect();
    let maximal: Vec<&Simplex> =
        in_k.iter().filter(|f| !in_k.iter().any(|g| g.len() > f.len() && f.is_face_of(g))).collect();
    if maximal.is_empty() {
        out.insert(Simplex::from_vertices(chain.clone()).expect("distinct chain labels"));
    }
    for tau in maximal {
        let mut vs = chain.clone();
        vs.extend(tau.vertices().iter().cloned());
        out.insert(Simplex::from_vertices(vs).expect("distinct chain labels"));
    }
    for f in bottom.facets() {
        if !k.contains(&f) {
            descend(&f, k, barycenter, chain, out);
        }
    }
    chain.pop();
}

/// The spine: full subcomplex of the barycentric subdivision spanned by the
/// barycenters of positive-dimensional simplices.
pub fn spine(x: &Complex) -> Result<(SubdivisionMap, Complex)> {
    if x.dim() < 1 {
        return Err(Error::Dimension { what: "spine needs dim >= 1", found: x.dim() });
    }
    let b = barycentric_subdivision(x);
    let vs: Vec<&Vertex> = b.barycenter.iter().filter(|(s, _)| s.len() > 1).map(|(_, v)| v).collect();
    let k = b.child.full_subcomplex(vs);
    Ok((b, k))
}

#[derive(Clone, Debug)]
pub struct Neighborhood {
    pub n: Complex,
    /// Simplices of `n` disjoint from the core subcomplex.
    pub ndot: Complex,
}

pub fn simplicial_neighborhood(x: &Complex, k: &Complex) -> Result<Neighborhood> {
    x.require_full(k)?;
    let kv: HashSet<Vertex> = k.vertices().into_iter().collect();
    let meets = x.iter().filter(|s| s.vertices().iter().any(|v| kv.contains(v))).cloned();
    let n = Complex::from_simplices(meets);
    let ndot = n.filter(|s| s.vertices().iter().all(|v| !kv.contains(v)));
    Ok(Neighborhood { n, ndot })
}

pub fn regular_neighborhood(x: &Complex, k: &Complex) -> Result<(Neighborhood, SubdivisionMap)> {
    x.require_full(k)?;
    let map = relative_barycentric_subdivision(x, k)?;
    let nb = simplicial_neighborhood(&map.child, k)?;
    Ok((nb, map))
}

#[derive(Clone, Debug)]
pub struct SpineBoundaryReport {
    /// `Lk_{X''}(v)` for every vertex `v` of the input.
    pub components: Vec<(Vertex, Complex)>,
    pub neighborhood: Neighborhood,
}

/// Computes the boundary of the regular neighborhood of the spine inside the
/// second barycentric subdivision and checks that it is the disjoint union
/// of the vertex links there.
pub fn spine_boundary_check(x: &Complex) -> Result<SpineBoundaryReport> {
    let (b1, k) = spine(x)?;
    let b2 = barycentric_subdivision(&b1.child);
    let kv: Vec<&Vertex> = k.iter().map(|t| &b2.barycenter[t]).collect();
    let kpp = b2.child.full_subcomplex(kv);
    let nb = simplicial_neighborhood(&b2.child, &kpp)?;

    let idx = b2.child.index();
    let mut components = Vec::new();
    let mut union = Complex::empty();
    let mut seen: HashSet<Vertex> = HashSet::new();
    for v in x.vertices() {
        let lk = idx.vertex_link(&v);
        for u in lk.vertices() {
            if !seen.insert(u.clone()) {
                return Err(Error::verify(format!("links of original vertices overlap at {u}")));
            }
        }
        union = union.union(&lk);
        components.push((v, lk));
    }
    if union != nb.ndot {
        let extra = nb.ndot.iter().find(|s| !union.contains(s));
        let missing = union.iter().find(|s| !nb.ndot.contains(s));
        return Err(Error::verify(format!(
            "neighborhood boundary differs from union of links (extra {extra:?}, missing {missing:?})"
        )));
    }
    Ok(SpineBoundaryReport { components, neighborhood: nb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complex_from;

    fn tri() -> Complex {
        complex_from(&[&["a", "b", "c"]])
    }

    fn tetra_boundary() -> Complex {
        complex_from(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "c", "d"], &["b", "c", "d"]])
    }

    /// Independent count of chains in the face poset, by dimension.
    fn chain_counts(x: &Complex) -> Vec<usize> {
        fn extend(x: &Complex, top: &Simplex, len: usize, counts: &mut Vec<usize>) {
            if counts.len() < len {
                counts.resize(len, 0);
            }
            counts[len - 1] += 1;
            for s in x.iter() {
                if s.len() > top.len() && top.is_face_of(s) {
                    extend(x, s, len + 1, counts);
                }
            }
        }
        let mut counts = Vec::new();
        for s in x.iter() {
            extend(x, s, 1, &mut counts);
        }
        counts
    }

    #[test]
    fn chain_label_collisions_are_refused() {
        let x = Complex::from_simplices([Simplex::new(["a", "b"]).unwrap(), Simplex::new(["[a,b]", "c"]).unwrap()]);
        assert!(matches!(barycentric_subdivision_checked(&x), Err(Error::VertexExists(_))));
    }

    fn barycentric_subdivision_checked(x: &Complex) -> Result<SubdivisionMap> {
        relative_barycentric_subdivision(x, &Complex::empty())
    }

    #[test]
    fn subdivision_counts() {
        assert_eq!(barycentric_subdivision(&tri()).child.f_vector(), vec![7, 12, 6]);
        let edge = complex_from(&[&["a", "b"]]);
        assert_eq!(barycentric_subdivision(&edge).child.f_vector(), vec![3, 2]);
        let s2 = barycentric_subdivision(&tetra_boundary()).child;
        assert_eq!(s2.f_vector(), chain_counts(&tetra_boundary()));
        assert_eq!(s2.f_vector(), vec![14, 36, 24]);
    }

    #[test]
    fn relative_subdivision() {
        let full = relative_barycentric_subdivision(&tri(), &Complex::empty()).unwrap();
        assert_eq!(full.child, barycentric_subdivision(&tri()).child);

        let k = complex_from(&[&["a", "b"]]);
        let r = relative_barycentric_subdivision(&tri(), &k).unwrap();
        let ab = Simplex::new(["a", "b"]).unwrap();
        assert!(r.child.contains(&ab));
        // direct enumeration: new vertices v_ac, v_bc, v_abc; triangles
        // {a,b,v_abc}, {a,v_ac,v_abc}, {c,v_ac,v_abc}, {b,v_bc,v_abc}, {c,v_bc,v_abc}
        assert_eq!(r.child.f_vector(), vec![6, 10, 5]);

        let same = relative_barycentric_subdivision(&tri(), &tri()).unwrap();
        assert_eq!(same.child, tri());
    }

    #[test]
    fn spines() {
        let (_, k) = spine(&tri()).unwrap();
        assert_eq!(k.f_vector(), vec![4, 3]);
        let (_, k) = spine(&tetra_boundary()).unwrap();
        assert_eq!(k.f_vector(), vec![10, 12]);
        assert_eq!(k.euler_characteristic(), -2); // b1 = 3
        let (_, k) = spine(&complex_from(&[&["a", "b"]])).unwrap();
        assert_eq!(k.f_vector(), vec![1]);
        assert!(spine(&complex_from(&[&["a"]])).is_err());
    }

    #[test]
    fn spine_is_union_of_vertex_links() {
        for x in [tri(), tetra_boundary()] {
            let (b, k) = spine(&x).unwrap();
            let idx = b.child.index();
            let mut u = Complex::empty();
            for v in x.vertices() {
                u = u.union(&idx.vertex_link(&v));
            }
            assert_eq!(u, k);
        }
    }

    #[test]
    fn neighborhoods() {
        let path = complex_from(&[&["a", "b"], &["b", "c"]]);
        let nb = simplicial_neighborhood(&path, &complex_from(&[&["b"]])).unwrap();
        assert_eq!(nb.n, path);
        assert_eq!(nb.ndot, complex_from(&[&["a"], &["c"]]));

        let nb = simplicial_neighborhood(&tri(), &tri()).unwrap();
        assert!(nb.ndot.is_empty());

        let (b, k) = spine(&tri()).unwrap();
        let nb = simplicial_neighborhood(&b.child, &k).unwrap();
        // only the original vertices avoid the spine
        assert_eq!(nb.ndot.f_vector(), vec![3]);
        assert_eq!(nb.n, b.child);

        let cyc = complex_from(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert!(matches!(simplicial_neighborhood(&tri(), &cyc), Err(Error::NotFull(_))));
    }

    #[test]
    fn regular_neighborhoods() {
        let (nb, _) = regular_neighborhood(&tri(), &complex_from(&[&["a"]])).unwrap();
        // cone over a path of two edges
        assert_eq!(nb.n.f_vector(), vec![4, 5, 2]);
        assert_eq!(nb.ndot.f_vector(), vec![3, 2]);
        assert!(nb.ndot.is_connected());

        let x = tetra_boundary();
        let (nb, _) = regular_neighborhood(&x, &complex_from(&[&["a"]])).unwrap();
        let lk = barycentric_subdivision(&x.link(&Simplex::new(["a"]).unwrap()).unwrap()).child;
        assert_eq!(nb.ndot.f_vector(), lk.f_vector());
        assert_eq!(nb.ndot.euler_characteristic(), 0);
        assert!(nb.ndot.is_connected());

        let (nb, _) = regular_neighborhood(&tri(), &tri()).unwrap();
        assert_eq!(nb.n, tri());
        assert!(nb.ndot.is_empty());
    }

    #[test]
    fn spine_boundary() {
        let r = spine_boundary_check(&tri()).unwrap();
        assert_eq!(r.components.len(), 3);
        for (_, c) in &r.components {
            assert_eq!(c.f_vector(), vec![5, 4]);
            assert!(c.is_connected());
        }
        let r = spine_boundary_check(&tetra_boundary()).unwrap();
        assert_eq!(r.components.len(), 4);
        for (_, c) in &r.components {
            assert_eq!(c.euler_characteristic(), 0);
            assert!(c.is_connected());
        }
        let r = spine_boundary_check(&complex_from(&[&["a", "b"]])).unwrap();
        assert_eq!(r.components.len(), 2);
        for (_, c) in &r.components {
            assert_eq!(c.f_vector(), vec![1]);
        }
    }
}
