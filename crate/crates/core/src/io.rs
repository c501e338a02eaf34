//! JSON and OFF serialization.
//!
//! A complex is stored as its vertex list and its maximal simplices, both in
//! sorted order, so equal complexes serialize to identical bytes. Exact
//! coordinates are written as reduced `"p/q"` strings (integers as `"p"`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{check_label, vertex, Complex, Simplex, Vertex};
use crate::error::{Error, Result};
use crate::geometry::{GeometricMap, Point, SpineEmbedding};
use crate::thicken::ThickeningOutput;
use crate::Rational;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    vertices: Vec<VertexJson>,
    simplices: Vec<Vec<String>>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn complex_json(c: &Complex, coords: Option<&BTreeMap<Vertex, Point<Rational>>>) -> ComplexJson {
    let vertices = c
        .vertices()
        .into_iter()
        .map(|v| VertexJson {
            id: v.to_string(),
            coords: coords.map(|m| m[&v].0.iter().map(format_rational).collect()),
        })
        .collect();
    let simplices =
        c.maximal_simplices().iter().map(|s| s.vertices().iter().map(|v| v.to_string()).collect()).collect();
    ComplexJson { vertices, simplices }
}

pub fn complex_to_json(c: &Complex) -> String {
    to_json(&complex_json(c, None))
}

pub fn map_to_json(m: &GeometricMap<Rational>) -> String {
    to_json(&complex_json(&m.domain, Some(&m.points)))
}

/// Bracketed labels are allowed when well formed: balanced, with nonempty
/// comma-separated items inside brackets only.
fn check_structured_label(v: &str) -> Result<()> {
    if !v.contains(['[', ']', ',']) {
        return check_label(v);
    }
    let bad = || Error::ReservedLabel(v.to_string());
    let mut depth = 0usize;
    let mut item_empty = true;
    for ch in v.chars() {
        match ch {
            '[' => {
                depth += 1;
                item_empty = true;
            }
            ']' | ',' => {
                if depth == 0 || item_empty {
                    return Err(bad());
                }
                if ch == ']' {
                    depth -= 1;
                    item_empty = false;
                } else {
                    item_empty = true;
                }
            }
            _ => item_empty = false,
        }
    }
    if depth != 0 {
        return Err(bad());
    }
    Ok(())
}

fn parse_complex_json(raw: ComplexJson) -> Result<(Complex, BTreeMap<Vertex, Vec<String>>)> {
    let mut ids = BTreeSet::new();
    let mut coords = BTreeMap::new();
    for v in raw.vertices {
        check_structured_label(&v.id)?;
        let id = vertex(&v.id);
        if !ids.insert(id.clone()) {
            return Err(Error::Parse(format!("vertex {:?} listed twice", v.id)));
        }
        if let Some(c) = v.coords {
            coords.insert(id, c);
        }
    }
    let mut simplices = Vec::with_capacity(raw.simplices.len() + ids.len());
    for s in &raw.simplices {
        if let Some(v) = s.iter().find(|v| !ids.contains(v.as_str())) {
            return Err(Error::Parse(format!("simplex {s:?} references unknown vertex {v:?}")));
        }
        simplices.push(Simplex::new(s)?);
    }
    simplices.extend(ids.iter().map(|v| Simplex::point(v.clone())));
    let c = Complex::from_simplices(simplices);
    // a bracketed label must not pose as the barycentre of a simplex present
    for v in &ids {
        if v.starts_with('[') && c.iter().any(|s| s.len() > 1 && s.chain_label() == *v) {
            return Err(Error::VertexExists(v.to_string()));
        }
    }
    Ok((c, coords))
}

pub fn complex_from_json(text: &str) -> Result<Complex> {
    let (c, coords) = parse_complex_json(serde_json::from_str(text)?)?;
    if !coords.is_empty() {
        return Err(Error::Parse("coordinates given; load this file as a geometric map".into()));
    }
    Ok(c)
}

pub fn map_from_json(text: &str) -> Result<GeometricMap<Rational>> {
    let (c, coords) = parse_complex_json(serde_json::from_str(text)?)?;
    let mut points = BTreeMap::new();
    let mut n = None;
    for v in c.vertices() {
        let raw = coords.get(&v).ok_or_else(|| Error::Parse(format!("vertex {v} has no coordinates")))?;
        let p = Point(raw.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
        if *n.get_or_insert(p.dim()) != p.dim() {
            return Err(Error::Parse(format!("vertex {v} has {} coordinates, expected {}", p.dim(), n.unwrap())));
        }
        points.insert(v, p);
    }
    GeometricMap::new(c, n.unwrap_or(0), points)
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Parses `"p"` or `"p/q"` with `q > 1` and `gcd(p, q) = 1`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |why: &str| Error::Parse(format!("rational {s:?}: {why}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (s, None),
    };
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty()
            || !digits.bytes().all(|b| b.is_ascii_digit())
            || (digits.len() > 1 && digits.starts_with('0'))
        {
            return Err(bad("not a canonical integer"));
        }
        if t.starts_with('-') && digits == "0" {
            return Err(bad("negative zero"));
        }
        t.parse().map_err(|_| bad("not an integer"))
    };
    let p = int(p)?;
    let q = match q {
        None => BigInt::one(),
        Some(q) => {
            let q = int(q)?;
            if !q.is_positive() {
                return Err(bad("denominator must be positive"));
            }
            if q.is_one() {
                return Err(bad("denominator 1 must be omitted"));
            }
            if !p.gcd(&q).is_one() || p.is_zero() {
                return Err(bad("not reduced"));
            }
            q
        }
    };
    Ok(Rational::new_raw(p, q))
}

/// Viewer coordinates for the vertices of `M` and its subdivisions.
///
/// Ball centres sit at the embedded barycentres of their simplices and the
/// other vertices of `M` are relaxed towards their neighbours; subdivision
/// vertices are averages of their parents. This is a picture, not a
/// certified embedding.
pub fn viewer_layout(t: &ThickeningOutput, se: &SpineEmbedding<Rational>) -> BTreeMap<Vertex, [f64; 3]> {
    let to_f = |p: &Point<Rational>| -> [f64; 3] {
        let c = |i: usize| p.0.get(i).and_then(|x| x.to_f64()).unwrap_or(0.0);
        [c(0), c(1), c(2)]
    };
    let anchor = |role: &str| -> Option<[f64; 3]> {
        let start = role.find('[')?;
        let mut depth = 0;
        let end = role[start..].char_indices().find_map(|(i, ch)| {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
            (depth == 0).then_some(start + i + 1)
        })?;
        let inner = &role[start + 1..end - 1];
        let s = Simplex::new(inner.split(',')).ok()?;
        let b = se.subdivision.barycenter.get(&s)?;
        se.subdivided.points.get(b).map(to_f)
    };
    let m = &t.spine.m;
    let mut pos: BTreeMap<Vertex, [f64; 3]> = BTreeMap::new();
    let mut pinned = BTreeSet::new();
    for (v, role) in &t.spine.roles {
        let p = anchor(role).unwrap_or([0.0; 3]);
        if role.starts_with("centre ") {
            pinned.insert(v.clone());
        }
        pos.insert(v.clone(), p);
    }
    let mut nbrs: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in m.simplices_of_dim(1) {
        let (a, b) = (&e.vertices()[0], &e.vertices()[1]);
        nbrs.entry(a.clone()).or_default().push(b.clone());
        nbrs.entry(b.clone()).or_default().push(a.clone());
    }
    for _ in 0..40 {
        let prev = pos.clone();
        for (v, ns) in &nbrs {
            if pinned.contains(v) {
                continue;
            }
            let mut acc = prev[v];
            for u in ns {
                for k in 0..3 {
                    acc[k] += prev[u][k];
                }
            }
            let w = (ns.len() + 1) as f64;
            pos.insert(v.clone(), acc.map(|x| x / w));
        }
    }
    let mut extra = t.m1.vertices();
    extra.extend(t.p.vertices());
    for v in extra {
        if !pos.contains_key(&v) {
            let p = chain_position(&v, &pos);
            pos.insert(v, p);
        }
    }
    pos
}

fn chain_position(v: &str, pos: &BTreeMap<Vertex, [f64; 3]>) -> [f64; 3] {
    if let Some(p) = pos.get(v) {
        return *p;
    }
    let Some(inner) = v.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
        return [0.0; 3];
    };
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&inner[start..]);
    let mut acc = [0.0; 3];
    for p in &parts {
        let q = chain_position(p, pos);
        for k in 0..3 {
            acc[k] += q[k];
        }
    }
    acc.map(|x| x / parts.len() as f64)
}

/// OFF text for the top simplices of a complex of dimension at most 2
/// (edges become two-vertex faces).
pub fn to_off(c: &Complex, pos: &BTreeMap<Vertex, [f64; 3]>) -> String {
    let vs = c.vertices();
    let index: BTreeMap<&Vertex, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let faces = c.maximal_simplices();
    let mut out = format!("OFF\n{} {} 0\n", vs.len(), faces.len());
    for v in &vs {
        let p = chain_position(v, pos);
        writeln!(out, "{:.6} {:.6} {:.6}", p[0], p[1], p[2]).unwrap();
    }
    for f in &faces {
        write!(out, "{}", f.len()).unwrap();
        for v in f.vertices() {
            write!(out, " {}", index[v]).unwrap();
        }
        out.push('\n');
    }
    out
}
