//! Named example complexes.

use crate::complex::{validate_complex, Complex};

pub const NAMES: &[&str] = &[
    "triangle",
    "edge",
    "three-cycle",
    "four-cycle-cone",
    "tetrahedron-boundary",
    "simplex4-boundary",
    "pinched-spheres",
    "book-of-three",
    "projective-plane-6",
    "torus-7",
    "two-triangles-vertex",
    "two-triangles-edge",
    "wedge",
    "octahedron-cone",
    "torus-cone",
];

fn lit(raw: &[&[&str]]) -> Complex {
    let raw: Vec<Vec<&str>> = raw.iter().map(|s| s.to_vec()).collect();
    validate_complex(&raw).expect("fixture literal")
}

fn owned(raw: Vec<Vec<String>>) -> Complex {
    validate_complex(&raw).expect("fixture literal")
}

fn tetra_boundary(prefix: &str) -> Vec<Vec<String>> {
    let v = |i: usize| format!("{prefix}{i}");
    [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].iter().map(|t| t.iter().map(|&i| v(i)).collect()).collect()
}

fn torus7() -> Vec<Vec<String>> {
    (0..7)
        .flat_map(|i| {
            [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]
                .map(|t| t.iter().map(|j| j.to_string()).collect::<Vec<_>>())
        })
        .collect()
}

fn cone(base: Vec<Vec<String>>, apex: &str) -> Vec<Vec<String>> {
    base.into_iter()
        .map(|mut s| {
            s.push(apex.to_string());
            s
        })
        .collect()
}

pub fn fixture(name: &str) -> Option<Complex> {
    Some(match name {
        "triangle" => lit(&[&["a", "b", "c"]]),
        "edge" => lit(&[&["a", "b"]]),
        "three-cycle" => lit(&[&["a", "b"], &["b", "c"], &["a", "c"]]),
        "four-cycle-cone" => lit(&[&["a", "b", "o"], &["b", "c", "o"], &["c", "d", "o"], &["a", "d", "o"]]),
        "tetrahedron-boundary" => owned(tetra_boundary("")),
        "simplex4-boundary" => {
            let all = ["0", "1", "2", "3", "4"];
            owned(
                (0..5)
                    .map(|k| all.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| v.to_string()).collect())
                    .collect(),
            )
        }
        "pinched-spheres" => {
            // two tetrahedron boundaries sharing the vertex "p"
            let mut a = tetra_boundary("a");
            let mut b = tetra_boundary("b");
            for s in a.iter_mut().chain(b.iter_mut()) {
                for v in s.iter_mut() {
                    if v == "a0" || v == "b0" {
                        *v = "p".into();
                    }
                }
            }
            a.append(&mut b);
            owned(a)
        }
        "book-of-three" => lit(&[&["a", "b", "c"], &["a", "b", "d"], &["a", "b", "e"]]),
        "projective-plane-6" => lit(&[
            &["1", "2", "3"],
            &["1", "3", "4"],
            &["1", "4", "5"],
            &["1", "5", "6"],
            &["1", "2", "6"],
            &["2", "3", "5"],
            &["2", "4", "5"],
            &["2", "4", "6"],
            &["3", "4", "6"],
            &["3", "5", "6"],
        ]),
        "torus-7" => owned(torus7()),
        "two-triangles-vertex" => lit(&[&["a", "b", "c"], &["a", "d", "e"]]),
        "two-triangles-edge" => lit(&[&["a", "b", "c"], &["a", "b", "d"]]),
        "wedge" => lit(&[&["a", "b", "c"], &["c", "d"]]),
        "octahedron-cone" => {
            let oct = lit(&[
                &["x", "y", "z"],
                &["x", "y", "Z"],
                &["x", "Y", "z"],
                &["x", "Y", "Z"],
                &["X", "y", "z"],
                &["X", "y", "Z"],
                &["X", "Y", "z"],
                &["X", "Y", "Z"],
            ]);
            let base =
                oct.maximal_simplices().iter().map(|s| s.vertices().iter().map(|v| v.to_string()).collect()).collect();
            owned(cone(base, "o"))
        }
        "torus-cone" => owned(cone(torus7(), "o")),
        _ => return None,
    })
}

pub fn all() -> Vec<(&'static str, Complex)> {
    NAMES.iter().map(|&n| (n, fixture(n).expect("listed fixture"))).collect()
}
