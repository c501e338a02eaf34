use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Complex, Simplex};

/// Repeatedly performs elementary collapses until no free face remains.
///
/// With `seed == 0` the lexicographically smallest free face is collapsed
/// first; any other seed picks uniformly among the free faces from a
/// seeded stream.
pub fn greedy_collapse(x: &Complex, seed: u64) -> Complex {
    let mut up: HashMap<Simplex, BTreeSet<Simplex>> = x.iter().map(|s| (s.clone(), BTreeSet::new())).collect();
    for s in x.iter() {
        for f in s.facets() {
            up.get_mut(&f).expect("closed complex").insert(s.clone());
        }
    }

    let is_free = |up: &HashMap<Simplex, BTreeSet<Simplex>>, t: &Simplex| -> Option<Simplex> {
        let cof = up.get(t)?;
        if cof.len() != 1 {
            return None;
        }
        let s = cof.iter().next().unwrap();
        up[s].is_empty().then(|| s.clone())
    };

    let mut free: BTreeSet<Simplex> = x.iter().filter(|t| is_free(&up, t).is_some()).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    while !free.is_empty() {
        let t = if seed == 0 {
            free.iter().next().unwrap().clone()
        } else {
            let k = rng.gen_range(0..free.len());
            free.iter().nth(k).unwrap().clone()
        };
        free.remove(&t);
        let Some(s) = is_free(&up, &t) else { continue };

        for f in s.facets() {
            if let Some(c) = up.get_mut(&f) {
                c.remove(&s);
            }
        }
        for f in t.facets() {
            if let Some(c) = up.get_mut(&f) {
                c.remove(&t);
            }
        }
        up.remove(&s);
        up.remove(&t);
        free.remove(&s);

        for f in s.proper_faces() {
            if f == t || !up.contains_key(&f) {
                continue;
            }
            if is_free(&up, &f).is_some() {
                free.insert(f);
            } else {
                free.remove(&f);
            }
        }
    }

    Complex::from_closed_set(up.into_keys().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{barycentric_subdivision, complex_from};

    #[test]
    fn triangle_collapses_to_point() {
        let tri = complex_from(&[&["a", "b", "c"]]);
        assert_eq!(greedy_collapse(&tri, 0).f_vector(), vec![1]);
        assert_eq!(greedy_collapse(&tri, 17).f_vector(), vec![1]);
    }

    #[test]
    fn sphere_does_not_collapse() {
        let x = complex_from(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "c", "d"], &["b", "c", "d"]]);
        assert_eq!(greedy_collapse(&x, 0), x);
    }

    #[test]
    fn subdivided_triangle_collapses() {
        let b = barycentric_subdivision(&complex_from(&[&["a", "b", "c"]])).child;
        for seed in 0..5 {
            assert_eq!(greedy_collapse(&b, seed).f_vector(), vec![1]);
        }
    }

    #[test]
    fn circle_survives() {
        let cyc = complex_from(&[&["a", "b"], &["b", "c"], &["a", "c"], &["c", "d"]]);
        assert_eq!(greedy_collapse(&cyc, 0).f_vector(), vec![3, 3]);
    }
}
