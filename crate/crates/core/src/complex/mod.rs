//! Abstract simplicial complexes over string-labelled vertices.
//!
//! A [`Complex`] is stored as the full set of its simplices, so every
//! constructor recomputes the face closure. Vertex labels are shared
//! `Arc<str>` handles; simplices keep their vertices strictly sorted.

mod collapse;
mod subdivision;

pub use collapse::greedy_collapse;
pub use subdivision::{
    barycentric_subdivision, regular_neighborhood, relative_barycentric_subdivision, simplicial_neighborhood, spine,
    spine_boundary_check, Neighborhood, SpineBoundaryReport, SubdivisionMap,
};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Vertex = Arc<str>;

pub fn vertex(label: &str) -> Vertex {
    Arc::from(label)
}

/// A nonempty, strictly sorted set of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new<I, S>(vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vs: Vec<Vertex> = Vec::new();
        for v in vertices {
            let v = v.as_ref();
            if v.is_empty() {
                return Err(Error::EmptyLabel);
            }
            vs.push(vertex(v));
        }
        Self::from_vertices(vs)
    }

    pub fn from_vertices(mut vs: Vec<Vertex>) -> Result<Self> {
        if vs.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].to_string()));
            }
        }
        Ok(Simplex(vs))
    }

    pub fn point(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: &str) -> bool {
        self.0.binary_search_by(|x| (**x).cmp(v)).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        !self.0.iter().any(|v| other.contains(v))
    }

    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let vs: Vec<Vertex> = self.0.iter().filter(|v| other.contains(v)).cloned().collect();
        (!vs.is_empty()).then(|| Simplex(vs))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut vs: Vec<Vertex> = self.0.iter().chain(other.0.iter()).cloned().collect();
        vs.sort();
        vs.dedup();
        Simplex(vs)
    }

    pub fn with_vertex(&self, v: &Vertex) -> Simplex {
        let mut vs = self.0.clone();
        if let Err(pos) = vs.binary_search(v) {
            vs.insert(pos, v.clone());
        }
        Simplex(vs)
    }

    /// The face opposite the `i`-th vertex; `None` for a 0-simplex.
    pub fn facet(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut vs = self.0.clone();
        vs.remove(i);
        Some(Simplex(vs))
    }

    pub fn facets(&self) -> Vec<Simplex> {
        (0..self.0.len()).filter_map(|i| self.facet(i)).collect()
    }

    pub fn without(&self, v: &str) -> Option<Simplex> {
        let vs: Vec<Vertex> = self.0.iter().filter(|x| &***x != v).cloned().collect();
        (!vs.is_empty()).then(|| Simplex(vs))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 24, "simplex too large for face enumeration");
        (1u32..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i].clone()).collect()))
            .collect()
    }

    pub fn proper_faces(&self) -> Vec<Simplex> {
        let mut f = self.faces();
        f.pop();
        f
    }

    /// Label used for the barycenter of this simplex in a subdivision:
    /// a vertex keeps its own label, larger simplices become `[a,b,...]`.
    pub fn chain_label(&self) -> Vertex {
        if self.0.len() == 1 {
            self.0[0].clone()
        } else {
            vertex(&self.to_string())
        }
    }

    /// Position of `v` in the sorted vertex list.
    pub fn position(&self, v: &str) -> Option<usize> {
        self.0.binary_search_by(|x| (**x).cmp(v)).ok()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|v| &**v))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite abstract simplicial complex, closed under faces.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Complex {
    simplices: BTreeSet<Simplex>,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("f_vector", &self.f_vector())
            .field("maximal", &self.maximal_simplices())
            .finish()
    }
}

impl Complex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Face closure of the given simplices.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut set = BTreeSet::new();
        for s in simplices {
            add_with_faces(&mut set, s);
        }
        Complex { simplices: set }
    }

    /// Builds a complex from a set that is already closed under faces.
    pub(crate) fn from_closed_set(simplices: BTreeSet<Simplex>) -> Self {
        let c = Complex { simplices };
        debug_assert!(c.is_closed());
        c
    }

    pub fn simplex(s: Simplex) -> Self {
        Self::from_simplices([s])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.simplices.contains(&Simplex::point(vertex(v)))
    }

    /// Dimension, or -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.simplices.iter().map(|s| s.dim() as isize).max().unwrap_or(-1)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices.iter().filter(|s| s.len() == 1).map(|s| s.0[0].clone()).collect()
    }

    pub fn simplices_of_dim(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.dim() == k)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        let mut f = vec![0; (d + 1).max(0) as usize];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let covered: HashSet<Simplex> = self.simplices.iter().flat_map(|s| s.facets()).collect();
        self.simplices.iter().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_simplices().iter().all(|s| s.dim() as isize == d)
    }

    pub fn is_closed(&self) -> bool {
        self.simplices.iter().all(|s| s.facets().iter().all(|f| self.simplices.contains(f)))
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.subcomplex_witness(other).is_none()
    }

    fn subcomplex_witness(&self, other: &Complex) -> Option<&Simplex> {
        self.simplices.iter().find(|s| !other.contains(s))
    }

    pub(crate) fn require_subcomplex_of(&self, other: &Complex) -> Result<()> {
        match self.subcomplex_witness(other) {
            Some(s) => Err(Error::NotSubcomplex(s.to_string())),
            None => Ok(()),
        }
    }

    pub fn union(&self, other: &Complex) -> Complex {
        let mut s = self.simplices.clone();
        s.extend(other.simplices.iter().cloned());
        Complex { simplices: s }
    }

    pub fn skeleton(&self, k: usize) -> Complex {
        Complex { simplices: self.simplices.iter().filter(|s| s.dim() <= k).cloned().collect() }
    }

    /// Subcomplex of all simplices whose vertices lie in `vs`.
    pub fn full_subcomplex<'a, I>(&self, vs: I) -> Complex
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        let keep: HashSet<&str> = vs.into_iter().map(|v| &**v).collect();
        Complex {
            simplices: self.simplices.iter().filter(|s| s.0.iter().all(|v| keep.contains(&**v))).cloned().collect(),
        }
    }

    /// Subcomplex of simplices satisfying `keep`; the predicate must be
    /// inherited by faces.
    pub fn filter<F: Fn(&Simplex) -> bool>(&self, keep: F) -> Complex {
        Complex { simplices: self.simplices.iter().filter(|s| keep(s)).cloned().collect() }
    }

    pub fn insert(&mut self, s: Simplex) {
        add_with_faces(&mut self.simplices, s);
    }

    pub fn relabel<F: Fn(&Vertex) -> Vertex>(&self, f: F) -> Result<Complex> {
        let mut out = BTreeSet::new();
        for s in &self.simplices {
            out.insert(Simplex::from_vertices(s.0.iter().map(&f).collect())?);
        }
        Ok(Complex { simplices: out })
    }

    /// Adjacency lists of the 1-skeleton.
    pub fn adjacency(&self) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for v in self.vertices() {
            adj.entry(v).or_default();
        }
        for e in self.simplices_of_dim(1) {
            adj.get_mut(&e.0[0]).unwrap().insert(e.0[1].clone());
            adj.get_mut(&e.0[1]).unwrap().insert(e.0[0].clone());
        }
        adj
    }

    /// Vertex sets of connected components, in sorted order.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let adj = self.adjacency();
        let mut seen: HashSet<Vertex> = HashSet::new();
        let mut comps = Vec::new();
        for v in adj.keys() {
            if seen.contains(v) {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([v.clone()]);
            seen.insert(v.clone());
            while let Some(u) = queue.pop_front() {
                for w in &adj[&u] {
                    if seen.insert(w.clone()) {
                        queue.push_back(w.clone());
                    }
                }
                comp.push(u);
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Splits the complex into its connected components.
    pub fn components(&self) -> Vec<Complex> {
        self.connected_components().iter().map(|c| self.full_subcomplex(c.iter())).collect()
    }

    pub fn index(&self) -> Incidence<'_> {
        Incidence::new(self)
    }

    pub fn star_link(&self, sigma: &Simplex) -> Result<(Complex, Complex)> {
        if !self.contains(sigma) {
            return Err(Error::NotInComplex(sigma.to_string()));
        }
        Ok(self.index().star_link(sigma))
    }

    pub fn link(&self, sigma: &Simplex) -> Result<Complex> {
        Ok(self.star_link(sigma)?.1)
    }

    pub fn boundary_and_free_faces(&self) -> (BTreeSet<Simplex>, Complex) {
        let mut cofaces: HashMap<Simplex, usize> = HashMap::new();
        for s in &self.simplices {
            for f in s.proper_faces() {
                *cofaces.entry(f).or_insert(0) += 1;
            }
        }
        let free: BTreeSet<Simplex> = cofaces.into_iter().filter(|(_, c)| *c == 1).map(|(s, _)| s).collect();
        let boundary = Complex::from_simplices(free.iter().cloned());
        (free, boundary)
    }

    /// Returns `Ok(None)` if `k` is full in `self`, otherwise a minimal
    /// simplex of `self` spanned by vertices of `k` but missing from `k`.
    pub fn full_subcomplex_witness(&self, k: &Complex) -> Result<Option<Simplex>> {
        k.require_subcomplex_of(self)?;
        let kv: HashSet<Vertex> = k.vertices().into_iter().collect();
        let mut best: Option<&Simplex> = None;
        for s in &self.simplices {
            if !k.contains(s) && s.0.iter().all(|v| kv.contains(v)) {
                if best.map_or(true, |b| s.len() < b.len()) {
                    best = Some(s);
                }
            }
        }
        Ok(best.cloned())
    }

    pub fn is_full_subcomplex(&self, k: &Complex) -> Result<bool> {
        Ok(self.full_subcomplex_witness(k)?.is_none())
    }

    pub(crate) fn require_full(&self, k: &Complex) -> Result<()> {
        match self.full_subcomplex_witness(k)? {
            Some(w) => Err(Error::NotFull(w.to_string())),
            None => Ok(()),
        }
    }

    pub fn cone_off(&self, l: &Complex, w: &str) -> Result<Complex> {
        l.require_subcomplex_of(self)?;
        if w.is_empty() {
            return Err(Error::EmptyLabel);
        }
        if self.contains_vertex(w) {
            return Err(Error::VertexExists(w.to_string()));
        }
        let wv = vertex(w);
        let mut out = self.simplices.clone();
        out.insert(Simplex::point(wv.clone()));
        for t in l.iter() {
            out.insert(t.with_vertex(&wv));
        }
        Ok(Complex { simplices: out })
    }

    /// Checks the flag condition; on failure returns a minimal non-face
    /// whose vertices are pairwise adjacent.
    pub fn flag_witness(&self) -> Option<Simplex> {
        let adj = self.adjacency();
        let mut by_dim: Vec<&Simplex> = self.simplices.iter().filter(|s| s.len() >= 2).collect();
        by_dim.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for s in by_dim {
            let first = &adj[&s.0[0]];
            for u in first {
                if s.contains(u) {
                    continue;
                }
                if s.0[1..].iter().all(|v| adj[v].contains(u)) {
                    let t = s.with_vertex(u);
                    if !self.contains(&t) {
                        return Some(t);
                    }
                }
            }
        }
        None
    }

    pub fn is_flag(&self) -> bool {
        self.flag_witness().is_none()
    }

    /// Join with a disjoint complex.
    pub fn join(&self, other: &Complex) -> Complex {
        let mut out = self.simplices.clone();
        out.extend(other.simplices.iter().cloned());
        for a in &self.simplices {
            for b in &other.simplices {
                out.insert(a.union(b));
            }
        }
        Complex { simplices: out }
    }
}

fn add_with_faces(set: &mut BTreeSet<Simplex>, s: Simplex) {
    if set.contains(&s) {
        return;
    }
    let facets = s.facets();
    set.insert(s);
    for f in facets {
        add_with_faces(set, f);
    }
}

/// Vertex-to-coface index for repeated star and link queries.
pub struct Incidence<'a> {
    complex: &'a Complex,
    by_vertex: HashMap<&'a str, Vec<&'a Simplex>>,
}

impl<'a> Incidence<'a> {
    pub fn new(complex: &'a Complex) -> Self {
        let mut by_vertex: HashMap<&'a str, Vec<&'a Simplex>> = HashMap::new();
        for s in complex.iter() {
            for v in &s.0 {
                by_vertex.entry(&**v).or_default().push(s);
            }
        }
        Incidence { complex, by_vertex }
    }

    pub fn complex(&self) -> &'a Complex {
        self.complex
    }

    /// Simplices containing `sigma` (including `sigma`).
    pub fn cofaces(&self, sigma: &Simplex) -> Vec<&'a Simplex> {
        let pivot =
            sigma.0.iter().min_by_key(|v| self.by_vertex.get(&***v).map_or(0, |l| l.len())).expect("nonempty simplex");
        self.by_vertex
            .get(&**pivot)
            .map(|l| l.iter().copied().filter(|t| sigma.is_face_of(t)).collect())
            .unwrap_or_default()
    }

    pub fn star_link(&self, sigma: &Simplex) -> (Complex, Complex) {
        let cof = self.cofaces(sigma);
        let star = Complex::from_simplices(cof.iter().map(|s| (*s).clone()));
        let mut link = BTreeSet::new();
        for t in &cof {
            let rest: Vec<Vertex> = t.0.iter().filter(|v| !sigma.contains(v)).cloned().collect();
            if !rest.is_empty() {
                link.insert(Simplex(rest));
            }
        }
        (star, Complex::from_closed_set(link))
    }

    pub fn link(&self, sigma: &Simplex) -> Complex {
        let mut link = BTreeSet::new();
        for t in self.cofaces(sigma) {
            let rest: Vec<Vertex> = t.0.iter().filter(|v| !sigma.contains(v)).cloned().collect();
            if !rest.is_empty() {
                link.insert(Simplex(rest));
            }
        }
        Complex::from_closed_set(link)
    }

    pub fn vertex_link(&self, v: &Vertex) -> Complex {
        self.link(&Simplex::point(v.clone()))
    }

    /// Number of simplices of dimension `dim(sigma) + 1` containing `sigma`.
    pub fn degree(&self, sigma: &Simplex) -> usize {
        self.cofaces(sigma).iter().filter(|t| t.len() == sigma.len() + 1).count()
    }
}

/// Validates raw maximal simplices and returns their face closure.
pub fn validate_complex<S: AsRef<str>>(raw: &[Vec<S>]) -> Result<Complex> {
    let mut simplices = Vec::with_capacity(raw.len());
    for r in raw {
        for v in r {
            check_label(v.as_ref())?;
        }
        simplices.push(Simplex::new(r.iter().map(|v| v.as_ref()))?);
    }
    Ok(Complex::from_simplices(simplices))
}

pub(crate) fn check_label(v: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::EmptyLabel);
    }
    if v.contains(['[', ']', ',']) {
        return Err(Error::ReservedLabel(v.to_string()));
    }
    Ok(())
}

/// Convenience constructor for tests and fixtures.
pub fn complex_from(raw: &[&[&str]]) -> Complex {
    let raw: Vec<Vec<&str>> = raw.iter().map(|s| s.to_vec()).collect();
    validate_complex(&raw).expect("valid literal complex")
}
