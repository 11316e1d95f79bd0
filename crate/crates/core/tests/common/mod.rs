#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use tetra_census::generators::{regular_tet, two_tets};
use tetra_census::{generate, GeneratorSpec, Mesh3, MeshCounts};

/// Entity counts from enumerating the vertex subsets of every cell, with no
/// use of the library's entity tables.
pub fn brute_counts(m: &Mesh3) -> MeshCounts {
    let mut edges = BTreeSet::new();
    let mut faces: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for c in m.cells() {
        let mut c = *c;
        c.sort_unstable();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.insert([c[i], c[j]]);
            }
        }
        for skip in 0..4 {
            let f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| c[i]).collect();
            *faces.entry([f[0], f[1], f[2]]).or_default() += 1;
        }
    }
    let bfaces: Vec<[usize; 3]> = faces
        .iter()
        .filter(|(_, &n)| n == 1)
        .map(|(f, _)| *f)
        .collect();
    let mut bedges = BTreeSet::new();
    let mut bverts = BTreeSet::new();
    for f in &bfaces {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            bedges.insert([f[a], f[b]]);
        }
        bverts.extend(f.iter().copied());
    }
    MeshCounts::new(
        m.n_vertices() as i64,
        edges.len() as i64,
        faces.len() as i64,
        m.n_cells() as i64,
        bverts.len() as i64,
        bedges.len() as i64,
        bfaces.len() as i64,
    )
}

/// Per-vertex `(e_i, f_i, t_i, interior)` by brute force.
pub fn brute_stars(m: &Mesh3) -> Vec<(usize, usize, usize, bool)> {
    let mut edges = BTreeSet::new();
    let mut faces: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut cells = vec![0; m.n_vertices()];
    for c in m.cells() {
        let mut c = *c;
        c.sort_unstable();
        for &v in &c {
            cells[v] += 1;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                edges.insert([c[i], c[j]]);
            }
        }
        for skip in 0..4 {
            let f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| c[i]).collect();
            *faces.entry([f[0], f[1], f[2]]).or_default() += 1;
        }
    }
    let mut out: Vec<(usize, usize, usize, bool)> =
        cells.iter().map(|&t| (0, 0, t, true)).collect();
    for e in &edges {
        for &v in e {
            out[v].0 += 1;
        }
    }
    for (f, &n) in &faces {
        for &v in f {
            out[v].1 += 1;
            if n == 1 {
                out[v].3 = false;
            }
        }
    }
    out
}

pub fn assert_topology(c: &MeshCounts) {
    assert_eq!(c.chi(), 1, "Euler characteristic of {c:?}");
    assert_eq!(c.chi_b(), 2, "boundary Euler characteristic of {c:?}");
    assert!(c.marble_identities_hold(), "marble identities of {c:?}");
}

/// Small named meshes covering every generator.
pub fn sample_meshes() -> Vec<(String, Mesh3)> {
    let mut out = vec![
        (
            "single tet".to_string(),
            generate(&GeneratorSpec::single_tet()).unwrap(),
        ),
        ("two tets".to_string(), two_tets()),
        ("regular tet".to_string(), regular_tet()),
    ];
    for (n, m, l) in [(1, 1, 1), (2, 1, 1), (2, 2, 2)] {
        out.push((
            format!("freudenthal {n}x{m}x{l}"),
            generate(&GeneratorSpec::freudenthal(n, m, l)).unwrap(),
        ));
    }
    for vb in [4, 5, 9] {
        out.push((
            format!("star {vb}"),
            generate(&GeneratorSpec::star(vb)).unwrap(),
        ));
    }
    for k in [3, 6] {
        out.push((
            format!("diamond {k}"),
            generate(&GeneratorSpec::diamond(k)).unwrap(),
        ));
    }
    out
}
