//! Closing a pseudomanifold with boundary by the reflection group trick:
//! copies of a chamber indexed by `(Z/2)^S`, glued along mirrors.
//!
//! The right-angled Coxeter group `W_L` is quotiented by the kernel of
//! `W_L → (Z/2)^S`, so chambers are bit-vectors and a point `(w, y)` is
//! identified with `(w', y)` whenever `w ⊕ w'` is supported on `S(y)`.

mod local;

pub use local::{local_link, local_links, verify_closed_locally, LocalKind, LocalLink, LocalReport};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{barycentric_subdivision, vertex, Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::pseudomanifold::{check_isolated_singularities, check_pseudomanifold, orient, PseudomanifoldReport};

/// Largest mirror count for which chambers fit in a machine word.
const MAX_MIRRORS: usize = 63;

/// A chamber `Y` with mirrors `Y_s`, `s ∈ S`.
#[derive(Clone, Debug)]
pub struct MirrorStructure {
    pub y: Complex,
    pub s: Vec<Vertex>,
    pub mirrors: BTreeMap<Vertex, Complex>,
    /// `S(y)` of every vertex of `Y`, as a bit-vector over `s`.
    pub sof: BTreeMap<Vertex, u64>,
}

fn saturating_required(mirrors: usize, chamber: u128) -> u128 {
    if mirrors >= 127 {
        return u128::MAX;
    }
    (1u128 << mirrors).saturating_mul(chamber)
}

impl MirrorStructure {
    pub fn new(y: Complex, mirrors: BTreeMap<Vertex, Complex>) -> Result<Self> {
        if mirrors.len() > MAX_MIRRORS {
            return Err(Error::BudgetExceeded {
                needed: saturating_required(mirrors.len(), 1),
                budget: 1u128 << MAX_MIRRORS,
            });
        }
        let mut sof: BTreeMap<Vertex, u64> = y.vertices().into_iter().map(|v| (v, 0)).collect();
        for (i, m) in mirrors.values().enumerate() {
            m.require_subcomplex_of(&y)?;
            for v in m.vertices() {
                *sof.get_mut(&v).expect("mirror inside Y") |= 1 << i;
            }
        }
        let s = mirrors.keys().cloned().collect();
        Ok(MirrorStructure { y, s, mirrors, sof })
    }

    /// `S(σ)`: the mirrors containing every vertex of `σ`.
    pub fn simplex_mask(&self, sigma: &Simplex) -> u64 {
        sigma.vertices().iter().fold(u64::MAX, |m, v| m & self.sof[v])
    }

    pub fn required_simplices(&self) -> u128 {
        saturating_required(self.s.len(), self.y.len() as u128)
    }

    /// `χ(U) = Σ_σ (−1)^{dim σ} 2^{|S| − |S(σ)|}`, counting orbits of simplices.
    pub fn orbit_euler_characteristic(&self) -> i128 {
        let n = self.s.len() as u32;
        self.y
            .iter()
            .map(|s| {
                let copies = 1i128 << (n - self.simplex_mask(s).count_ones());
                if s.dim() % 2 == 0 {
                    copies
                } else {
                    -copies
                }
            })
            .sum()
    }
}

/// Mirror data read off the boundary of a pseudomanifold. The chamber is
/// the barycentric subdivision of `chamber`, which is kept implicit because
/// it is usually far too large to build.
#[derive(Clone, Debug)]
pub struct BoundaryMirrors {
    /// `P`, or its barycentric subdivision when `∂P` is not flag.
    pub chamber: Complex,
    /// The flag boundary triangulation `L` of `chamber`.
    pub boundary: Complex,
    pub subdivided: bool,
    pub s: Vec<Vertex>,
}

/// Number of chains of faces ending at a simplex with `n` vertices
/// (ordered Bell numbers).
fn ordered_bell(n: usize) -> u128 {
    let mut a = vec![1u128];
    let mut binom = vec![vec![1u128]];
    for m in 1..=n {
        let mut row = vec![1u128; m + 1];
        for k in 1..m {
            row[k] = binom[m - 1][k - 1] + binom[m - 1][k];
        }
        binom.push(row);
        a.push((1..=m).map(|k| binom[m][k] * a[m - k]).sum());
    }
    a[n]
}

impl BoundaryMirrors {
    /// Simplex count of the chamber `Y = B(chamber)`.
    pub fn chamber_size(&self) -> u128 {
        let mut by_len = BTreeMap::new();
        for s in self.chamber.iter() {
            *by_len.entry(s.len()).or_insert(0u128) += 1;
        }
        by_len.into_iter().map(|(n, c)| c * ordered_bell(n)).sum()
    }

    pub fn required_simplices(&self) -> u128 {
        saturating_required(self.s.len(), self.chamber_size())
    }

    pub fn sof(&self, tau: &Simplex) -> Vec<Vertex> {
        if self.boundary.contains(tau) {
            tau.vertices().to_vec()
        } else {
            Vec::new()
        }
    }

    /// Builds `Y` with the mirrors `Y_s = St(s, L′)`.
    pub fn materialize(&self) -> Result<MirrorStructure> {
        let sub = barycentric_subdivision(&self.chamber);
        let y = sub.child;
        let lprime = y.filter(|s| s.vertices().iter().all(|v| self.boundary.contains(&sub.parent[v])));
        let mut mirrors = BTreeMap::new();
        for s in &self.s {
            let star = lprime.iter().filter(|t| t.contains(s)).cloned();
            mirrors.insert(s.clone(), Complex::from_simplices(star));
        }
        MirrorStructure::new(y, mirrors)
    }
}

pub fn boundary_mirror_structure(p: &Complex) -> Result<BoundaryMirrors> {
    let rep = check_pseudomanifold(p)?;
    if !rep.facet_degrees_ok {
        return Err(Error::verify(format!("not a pseudomanifold (witness {:?})", rep.degree_witness)));
    }
    if rep.boundary.is_empty() {
        return Err(Error::AlreadyClosed);
    }
    let (chamber, boundary, subdivided) = if rep.boundary.is_flag() {
        (p.clone(), rep.boundary, false)
    } else {
        let sub = barycentric_subdivision(p);
        let boundary = sub.child.filter(|s| sub.carrier(s).is_some_and(|c| rep.boundary.contains(&c)));
        if let Some(w) = boundary.flag_witness() {
            return Err(Error::verify(format!("subdivided boundary is not flag: {w}")));
        }
        (sub.child, boundary, true)
    };
    let s = boundary.vertices();
    Ok(BoundaryMirrors { chamber, boundary, subdivided, s })
}

/// `((Z/2)^S × Y)/∼`.
#[derive(Clone, Debug)]
pub struct ChamberComplex {
    pub q: Complex,
    pub chambers: u128,
    pub mirrors: MirrorStructure,
}

impl ChamberComplex {
    pub fn vertex_label(&self, w: u64, y: &Vertex) -> Vertex {
        chamber_vertex(w & !self.mirrors.sof[y], y)
    }

    /// Image of `σ ⊆ Y` in the chamber `w`.
    pub fn chamber_simplex(&self, w: u64, sigma: &Simplex) -> Simplex {
        let vs = sigma.vertices().iter().map(|y| self.vertex_label(w, y)).collect();
        Simplex::from_vertices(vs).expect("a chamber embeds its simplices")
    }

    /// The identity chamber meets no simplex twice.
    pub fn identity_chamber_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.mirrors.y.iter().all(|s| {
            let img = self.chamber_simplex(0, s);
            self.q.contains(&img) && seen.insert(img)
        })
    }
}

fn chamber_vertex(w: u64, y: &Vertex) -> Vertex {
    vertex(&format!("{y}@{w:x}"))
}

pub fn basic_construction(ms: &MirrorStructure, budget: u128) -> Result<ChamberComplex> {
    let needed = ms.required_simplices();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let chambers = 1u64 << ms.s.len();
    let tops = ms.y.maximal_simplices();
    let mut out = Vec::with_capacity(tops.len() * chambers as usize);
    for w in 0..chambers {
        for t in &tops {
            let vs = t.vertices().iter().map(|y| chamber_vertex(w & !ms.sof[y], y)).collect();
            out.push(Simplex::from_vertices(vs)?);
        }
    }
    let q = Complex::from_simplices(out);
    Ok(ChamberComplex { q, chambers: chambers as u128, mirrors: ms.clone() })
}

#[derive(Clone, Debug, Serialize)]
pub struct CloseUpReport {
    pub mirrors: usize,
    pub chambers: u128,
    pub subdivided: bool,
    pub q_f_vector: Vec<usize>,
    pub closed: bool,
    pub pseudomanifold: PseudomanifoldReport,
    pub orientable: bool,
    pub euler_characteristic: i64,
    pub orbit_euler_characteristic: i128,
    pub identity_chamber_injective: bool,
    pub asphericity: &'static str,
}

impl CloseUpReport {
    pub fn passed(&self) -> bool {
        self.closed
            && self.pseudomanifold.isolated_singularities != Some(false)
            && self.euler_characteristic as i128 == self.orbit_euler_characteristic
            && self.identity_chamber_injective
    }
}

#[derive(Clone, Debug)]
pub struct CloseUp {
    pub boundary_mirrors: BoundaryMirrors,
    pub chamber: ChamberComplex,
    pub report: CloseUpReport,
}

pub fn close_up(p: &Complex, budget: u128) -> Result<CloseUp> {
    let bm = boundary_mirror_structure(p)?;
    let needed = bm.required_simplices();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let ms = bm.materialize()?;
    let chamber = basic_construction(&ms, budget)?;
    let q = &chamber.q;
    let mut rep = check_pseudomanifold(q)?;
    if rep.facet_degrees_ok && q.dim() <= 3 {
        check_isolated_singularities(q, &mut rep)?;
    }
    let orientable = orient(q, &BTreeSet::new())?.is_ok();
    rep.orientable = Some(orientable);
    let report = CloseUpReport {
        mirrors: ms.s.len(),
        chambers: chamber.chambers,
        subdivided: bm.subdivided,
        q_f_vector: q.f_vector(),
        closed: rep.facet_degrees_ok && rep.boundary.is_empty(),
        orientable,
        euler_characteristic: q.euler_characteristic(),
        orbit_euler_characteristic: ms.orbit_euler_characteristic(),
        identity_chamber_injective: chamber.identity_chamber_injective(),
        pseudomanifold: rep,
        asphericity: "not checked",
    };
    Ok(CloseUp { boundary_mirrors: bm, chamber, report })
}
