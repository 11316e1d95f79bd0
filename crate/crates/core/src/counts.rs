//! Entity counts, Euler characteristics and per-vertex star statistics.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::mesh::Mesh3;

/// Entity counts of a tetrahedral mesh and its boundary surface.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeshCounts {
    pub v: i64,
    pub e: i64,
    pub f: i64,
    pub t: i64,
    pub vb: i64,
    pub eb: i64,
    pub fb: i64,
}

fn ratio(num: i64, den: i64) -> Option<Rational64> {
    (den != 0).then(|| Rational64::new(num, den))
}

impl MeshCounts {
    pub fn new(v: i64, e: i64, f: i64, t: i64, vb: i64, eb: i64, fb: i64) -> Self {
        MeshCounts {
            v,
            e,
            f,
            t,
            vb,
            eb,
            fb,
        }
    }

    pub fn chi(&self) -> i64 {
        self.v - self.e + self.f - self.t
    }

    pub fn chi_b(&self) -> i64 {
        self.vb - self.eb + self.fb
    }

    /// Mean number of edges per vertex, `2E/V`.
    pub fn ebar(&self) -> Option<Rational64> {
        ratio(2 * self.e, self.v)
    }

    pub fn fbar(&self) -> Option<Rational64> {
        ratio(3 * self.f, self.v)
    }

    pub fn tbar(&self) -> Option<Rational64> {
        ratio(4 * self.t, self.v)
    }

    /// Mean number of faces per edge, `3F/E`.
    pub fn phibar(&self) -> Option<Rational64> {
        ratio(3 * self.f, self.e)
    }

    /// Mean number of cells per edge, `6T/E`.
    pub fn thetabar(&self) -> Option<Rational64> {
        ratio(6 * self.t, self.e)
    }

    /// `2F - F_b = 4T` and `3F_b = 2E_b`.
    pub fn marble_identities_hold(&self) -> bool {
        2 * self.f - self.fb == 4 * self.t && 3 * self.fb == 2 * self.eb
    }

    pub fn as_vector(&self) -> [i64; 4] {
        [self.v, self.e, self.f, self.t]
    }
}

pub fn counts(mesh: &Mesh3) -> MeshCounts {
    let t = mesh.tables();
    let n = |flags: &[bool]| flags.iter().filter(|&&b| b).count() as i64;
    MeshCounts {
        v: mesh.n_vertices() as i64,
        e: t.edges.len() as i64,
        f: t.faces.len() as i64,
        t: mesh.n_cells() as i64,
        vb: n(&t.vertex_boundary),
        eb: n(&t.edge_boundary),
        fb: n(&t.face_boundary),
    }
}

/// Counts of the entities containing one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexStar {
    pub vertex: usize,
    pub edges: usize,
    pub faces: usize,
    pub cells: usize,
    pub interior: bool,
}

impl VertexStar {
    /// `f_i = 3(e_i - 2)` and `t_i = 2(e_i - 2)`; only meaningful for
    /// interior vertices.
    pub fn star_identities_hold(&self) -> bool {
        self.edges >= 2 && self.faces == 3 * (self.edges - 2) && self.cells == 2 * (self.edges - 2)
    }
}

pub fn vertex_stars(mesh: &Mesh3) -> Vec<VertexStar> {
    let t = mesh.tables();
    let mut stars: Vec<VertexStar> = (0..mesh.n_vertices())
        .map(|v| VertexStar {
            vertex: v,
            edges: 0,
            faces: 0,
            cells: 0,
            interior: !t.vertex_boundary[v],
        })
        .collect();
    for e in &t.edges {
        for &v in e {
            stars[v].edges += 1;
        }
    }
    for f in &t.faces {
        for &v in f {
            stars[v].faces += 1;
        }
    }
    for c in mesh.cells() {
        for &v in c {
            stars[v].cells += 1;
        }
    }
    stars
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Coords;

    #[test]
    fn single_tet_counts() {
        let m = Mesh3::build(
            Coords::from_integers(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            vec![[0, 1, 2, 3]],
        )
        .unwrap();
        let c = counts(&m);
        assert_eq!(c, MeshCounts::new(4, 6, 4, 1, 4, 6, 4));
        assert_eq!((c.chi(), c.chi_b()), (1, 2));
        assert!(c.marble_identities_hold());
        assert_eq!(c.ebar(), Some(Rational64::new(3, 1)));
        let stars = vertex_stars(&m);
        assert!(stars.iter().all(|s| s.edges == 3 && !s.interior));
    }

    #[test]
    fn empty_counts_have_no_averages() {
        let c = MeshCounts::default();
        assert_eq!(c.ebar(), None);
        assert_eq!(c.thetabar(), None);
        assert_eq!(c.chi(), 0);
    }
}
