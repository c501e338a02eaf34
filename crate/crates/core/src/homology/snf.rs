//! Smith normal form over the integers.
//!
//! Matrices are first reduced sparsely by eliminating unit pivots (boundary
//! matrices are mostly ±1, so this usually finishes the job); whatever is
//! left goes through a dense reduction that always pivots on the entry of
//! smallest absolute value. Both stages run in `i64` with checked
//! arithmetic and restart in `BigInt` on overflow.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait SnfInt: Clone + Eq + Ord + Zero + One + Signed + Integer {
    fn add_c(&self, o: &Self) -> Option<Self>;
    fn sub_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl SnfInt for i64 {
    fn add_c(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn add_c(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Nonzero diagonal of the Smith normal form: positive, each dividing the
/// next. Its length is the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Snf {
    let ncols = m.first().map_or(0, Vec::len);
    let mut cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); ncols];
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), ncols, "ragged matrix");
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                cols[j].push((i, x.clone()));
            }
        }
    }
    let small: Option<Vec<Vec<(usize, i64)>>> =
        cols.iter().map(|c| c.iter().map(|(i, x)| x.to_i64().map(|v| (*i, v))).collect()).collect();
    let diagonal = small
        .and_then(|c| elementary_divisors::<i64>(m.len(), c))
        .unwrap_or_else(|| elementary_divisors::<BigInt>(m.len(), cols).expect("bigint is exact"));
    Snf { rank: diagonal.len(), diagonal }
}

/// Elementary divisors of a sparse column-major integer matrix.
pub(crate) fn sparse_divisors(nrows: usize, cols: Vec<Vec<(usize, i64)>>) -> Vec<BigInt> {
    match elementary_divisors::<i64>(nrows, cols.clone()) {
        Some(d) => d,
        None => {
            let big = cols.into_iter().map(|c| c.into_iter().map(|(i, x)| (i, BigInt::from(x))).collect()).collect();
            elementary_divisors::<BigInt>(nrows, big).expect("bigint is exact")
        }
    }
}

fn elementary_divisors<T: SnfInt>(nrows: usize, cols: Vec<Vec<(usize, T)>>) -> Option<Vec<BigInt>> {
    let mut m = Sparse::new(nrows, cols);
    let units = m.eliminate_units()?;
    let dense = m.remainder();
    let mut out = vec![BigInt::one(); units];
    out.extend(dense_snf(dense)?.iter().map(SnfInt::to_big));
    Some(out)
}

struct Sparse<T> {
    cols: Vec<BTreeMap<usize, T>>,
    rows: Vec<BTreeSet<usize>>,
}

impl<T: SnfInt> Sparse<T> {
    fn new(nrows: usize, cols: Vec<Vec<(usize, T)>>) -> Self {
        let mut rows = vec![BTreeSet::new(); nrows];
        let cols: Vec<BTreeMap<usize, T>> = cols
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                c.into_iter()
                    .filter(|(_, x)| !x.is_zero())
                    .inspect(|(i, _)| {
                        rows[*i].insert(j);
                    })
                    .collect()
            })
            .collect();
        Sparse { cols, rows }
    }

    /// Pivots on ±1 entries until none remain; returns the number of pivots.
    fn eliminate_units(&mut self) -> Option<usize> {
        let mut count = 0;
        loop {
            let mut progressed = false;
            for c in 0..self.cols.len() {
                let pivot = self.cols[c]
                    .iter()
                    .filter(|(_, x)| x.abs().is_one())
                    .min_by_key(|(i, _)| self.rows[**i].len())
                    .map(|(i, x)| (*i, x.clone()));
                if let Some((r, u)) = pivot {
                    self.pivot(r, c, &u)?;
                    count += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return Some(count);
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize, u: &T) -> Option<()> {
        let pivot_col: Vec<(usize, T)> = self.cols[c].iter().map(|(i, x)| (*i, x.clone())).collect();
        let others: Vec<usize> = self.rows[r].iter().copied().filter(|&j| j != c).collect();
        for j in others {
            // u is a unit, so u^{-1} = u
            let f = self.cols[j][&r].mul_c(u)?;
            for (i, v) in &pivot_col {
                let cur = self.cols[j].get(i).cloned().unwrap_or_else(T::zero);
                let new = cur.sub_c(&f.mul_c(v)?)?;
                if new.is_zero() {
                    self.cols[j].remove(i);
                    self.rows[*i].remove(&j);
                } else {
                    self.cols[j].insert(*i, new);
                    self.rows[*i].insert(j);
                }
            }
        }
        for (i, _) in pivot_col {
            self.rows[i].remove(&c);
        }
        self.cols[c].clear();
        debug_assert!(self.rows[r].is_empty());
        Some(())
    }

    fn remainder(&self) -> Vec<Vec<T>> {
        let live_cols: Vec<usize> = (0..self.cols.len()).filter(|&j| !self.cols[j].is_empty()).collect();
        let live_rows: Vec<usize> = (0..self.rows.len()).filter(|&i| !self.rows[i].is_empty()).collect();
        let row_pos: BTreeMap<usize, usize> = live_rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut dense = vec![vec![T::zero(); live_cols.len()]; live_rows.len()];
        for (k, &j) in live_cols.iter().enumerate() {
            for (i, x) in &self.cols[j] {
                dense[row_pos[i]][k] = x.clone();
            }
        }
        dense
    }
}

/// Dense reduction; returns the positive diagonal in divisibility order.
fn dense_snf<T: SnfInt>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < n.min(m) {
        let Some((pi, pj)) = smallest_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..m {
                    let v = a[i][j].sub_c(&q.mul_c(&a[t][j])?)?;
                    a[i][j] = v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..m {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for i in t..n {
                    let v = a[i][j].sub_c(&q.mul_c(&a[i][t])?)?;
                    a[i][j] = v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // a smaller remainder appeared in row/column t: move it to the pivot
                let (bi, bj) = smallest_in_cross(&a, t);
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..m {
                        let v = a[t][j].add_c(&a[i][j])?;
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Some(diag)
}

fn smallest_entry<T: SnfInt>(a: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let unit = ax.is_one();
                best = Some((i, j, ax));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn smallest_in_cross<T: SnfInt>(a: &[Vec<T>], t: usize) -> (usize, usize) {
    let mut best = (t, t, a[t][t].abs());
    for i in t + 1..a.len() {
        let v = a[i][t].abs();
        if !v.is_zero() && v < best.2 {
            best = (i, t, v);
        }
    }
    for j in t + 1..a[t].len() {
        let v = a[t][j].abs();
        if !v.is_zero() && v < best.2 {
            best = (t, j, v);
        }
    }
    (best.0, best.1)
}
