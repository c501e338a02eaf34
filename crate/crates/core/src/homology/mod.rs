//! Integer simplicial homology, absolute or relative to a subcomplex.

mod snf;

pub use snf::{smith_normal_form, Snf};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complex::{Complex, Simplex};
use crate::error::Result;

/// Chains of `x` modulo chains of an optional subcomplex. Simplices are
/// oriented by their sorted vertex order, so the `i`-th facet carries sign
/// `(-1)^i`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub bases: Vec<Vec<Simplex>>,
    /// `boundaries[k]` maps k-chains to (k−1)-chains, column-major sparse.
    /// `boundaries[0]` has no rows.
    boundaries: Vec<Vec<Vec<(usize, i64)>>>,
}

pub fn boundary_matrices(x: &Complex, rel: Option<&Complex>) -> Result<ChainComplex> {
    if let Some(a) = rel {
        a.require_subcomplex_of(x)?;
    }
    let dim = x.dim();
    let top = if dim < 0 { 0 } else { dim as usize + 1 };
    let mut bases: Vec<Vec<Simplex>> = vec![Vec::new(); top];
    for s in x.iter() {
        if rel.is_some_and(|a| a.contains(s)) {
            continue;
        }
        bases[s.dim()].push(s.clone());
    }
    let index: Vec<HashMap<&Simplex, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    let boundaries = (0..top)
        .map(|k| {
            bases[k]
                .iter()
                .map(|s| {
                    if k == 0 {
                        return Vec::new();
                    }
                    let mut col: Vec<(usize, i64)> = s
                        .facets()
                        .iter()
                        .enumerate()
                        .filter_map(|(i, f)| {
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            index[k - 1].get(f).map(|&r| (r, sign))
                        })
                        .collect();
                    col.sort_unstable();
                    col
                })
                .collect()
        })
        .collect();
    Ok(ChainComplex { bases, boundaries })
}

impl ChainComplex {
    pub fn rank(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    pub fn top(&self) -> usize {
        self.bases.len()
    }

    /// Dense `∂_k` as a `rank(k−1) × rank(k)` matrix.
    pub fn dense_boundary(&self, k: usize) -> Vec<Vec<i64>> {
        let rows = if k == 0 { 0 } else { self.rank(k - 1) };
        let mut m = vec![vec![0; self.rank(k)]; rows];
        if let Some(cols) = self.boundaries.get(k) {
            for (j, col) in cols.iter().enumerate() {
                for &(i, v) in col {
                    m[i][j] = v;
                }
            }
        }
        m
    }

    /// Checks `∂_{k−1} ∘ ∂_k = 0` for every `k`.
    pub fn is_chain_complex(&self) -> bool {
        (2..self.top()).all(|k| {
            self.boundaries[k].iter().all(|col| {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(i, v) in col {
                    for &(r, w) in &self.boundaries[k - 1][i] {
                        *acc.entry(r).or_default() += v * w;
                    }
                }
                acc.values().all(|&x| x == 0)
            })
        })
    }

    fn divisors(&self, k: usize) -> Vec<BigInt> {
        if k == 0 || k >= self.top() {
            return Vec::new();
        }
        snf::sparse_divisors(self.rank(k - 1), self.boundaries[k].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(serialize_with = "as_strings")]
    pub torsion: Vec<BigInt>,
}

fn as_strings<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
    #[serde(skip)]
    chain_euler: i64,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn torsion(&self, k: usize) -> &[BigInt] {
        self.groups.get(k).map_or(&[], |g| &g.torsion)
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.iter().any(|g| !g.torsion.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum()
    }

    /// Alternating count of the chain ranks; equals the Euler
    /// characteristic computed from homology.
    pub fn chain_euler_characteristic(&self) -> i64 {
        self.chain_euler
    }

    /// Same groups up to trailing zero groups.
    pub fn same_groups(&self, other: &HomologyResult) -> bool {
        let trim = |h: &HomologyResult| {
            let mut g = h.groups.clone();
            while g.last().is_some_and(|x| x.betti == 0 && x.torsion.is_empty()) {
                g.pop();
            }
            g
        };
        trim(self) == trim(other)
    }
}

pub fn homology_groups(x: &Complex, rel: Option<&Complex>) -> Result<HomologyResult> {
    let cc = boundary_matrices(x, rel)?;
    Ok(homology_of(&cc))
}

pub fn homology_of(cc: &ChainComplex) -> HomologyResult {
    let top = cc.top();
    let divisors: Vec<Vec<BigInt>> = (0..=top).into_par_iter().map(|k| cc.divisors(k)).collect();
    let groups = (0..top)
        .map(|k| {
            let betti = cc.rank(k) - divisors[k].len() - divisors[k + 1].len();
            let torsion = divisors[k + 1].iter().filter(|d| !d.is_one()).cloned().collect();
            HomologyGroup { betti, torsion }
        })
        .collect();
    let chain_euler = (0..top).map(|k| if k % 2 == 0 { cc.rank(k) as i64 } else { -(cc.rank(k) as i64) }).sum();
    HomologyResult { groups, chain_euler }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complex_from;

    #[test]
    fn three_cycle_boundary() {
        let c = complex_from(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let cc = boundary_matrices(&c, None).unwrap();
        let d1 = cc.dense_boundary(1);
        assert_eq!((d1.len(), d1[0].len()), (3, 3));
        let big: Vec<Vec<BigInt>> = d1.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        assert_eq!(smith_normal_form(&big).rank, 2);
        assert_eq!(homology_of(&cc).betti(), vec![1, 1]);
    }

    #[test]
    fn relative_disc() {
        let tri = complex_from(&[&["a", "b", "c"]]);
        let bd = complex_from(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let cc = boundary_matrices(&tri, Some(&bd)).unwrap();
        assert_eq!((cc.rank(0), cc.rank(1), cc.rank(2)), (0, 0, 1));
        assert!(cc.dense_boundary(2).is_empty());
        assert_eq!(homology_of(&cc).betti(), vec![0, 0, 1]);
        assert!(boundary_matrices(&bd, Some(&tri)).is_err());
    }

    #[test]
    fn sphere() {
        let x = complex_from(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "c", "d"], &["b", "c", "d"]]);
        let cc = boundary_matrices(&x, None).unwrap();
        assert!(cc.is_chain_complex());
        let h = homology_of(&cc);
        assert_eq!(h.betti(), vec![1, 0, 1]);
        assert!(!h.has_torsion());
        assert_eq!(h.euler_characteristic(), h.chain_euler_characteristic());
    }
}
