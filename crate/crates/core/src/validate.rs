//! Conformity checks for [`Mesh3`].

use std::cmp::Ordering;
use std::fmt;

use crate::geometry::{orient3_sign, Point3, Scalar};
use crate::mesh::{Coords, Mesh3};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A face shared by more than two cells.
    NonManifoldFace { face: [usize; 3], cells: usize },
    /// Two cells sharing a face lie on the same side of it, so they overlap.
    FoldedFace { face: [usize; 3], cells: [usize; 2] },
    /// A vertex lies in the closure of a cell it does not belong to.
    HangingVertex { vertex: usize, cell: usize },
    /// A boundary edge with fewer than two boundary faces.
    OpenBoundaryEdge { edge: [usize; 2] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonManifoldFace { face, cells } => {
                write!(f, "face {face:?} is shared by {cells} cells")
            }
            Violation::FoldedFace { face, cells } => {
                write!(
                    f,
                    "cells {} and {} overlap across face {face:?}",
                    cells[0], cells[1]
                )
            }
            Violation::HangingVertex { vertex, cell } => {
                write!(
                    f,
                    "vertex {vertex} lies on cell {cell} without being one of its vertices"
                )
            }
            Violation::OpenBoundaryEdge { edge } => {
                write!(
                    f,
                    "boundary edge {edge:?} has fewer than two boundary faces"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub orientation_fixes: usize,
}

impl ValidationReport {
    pub fn is_conforming(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(mesh: &Mesh3) -> ValidationReport {
    let mut violations = Vec::new();
    let t = mesh.tables();

    for (fi, cells) in t.face_cells.iter().enumerate() {
        if cells.len() > 2 {
            violations.push(Violation::NonManifoldFace {
                face: t.faces[fi],
                cells: cells.len(),
            });
        } else if cells.len() == 2 {
            let folded = match mesh.coords() {
                Coords::Exact(p) => same_side(p, mesh.cells(), t.faces[fi], [cells[0], cells[1]]),
                Coords::Float(p) => same_side(p, mesh.cells(), t.faces[fi], [cells[0], cells[1]]),
            };
            if folded {
                violations.push(Violation::FoldedFace {
                    face: t.faces[fi],
                    cells: [cells[0], cells[1]],
                });
            }
        }
    }

    for (ei, faces) in t.edge_faces.iter().enumerate() {
        if t.edge_boundary[ei] && faces.iter().filter(|&&f| t.face_boundary[f]).count() < 2 {
            violations.push(Violation::OpenBoundaryEdge { edge: t.edges[ei] });
        }
    }

    let hanging = match mesh.coords() {
        Coords::Exact(p) => hanging_vertices(mesh, p),
        Coords::Float(p) => hanging_vertices(mesh, p),
    };
    violations.extend(hanging);

    ValidationReport {
        violations,
        orientation_fixes: mesh.orientation_fixes(),
    }
}

fn apex(cell: &[usize; 4], face: &[usize; 3]) -> usize {
    *cell
        .iter()
        .find(|v| !face.contains(v))
        .expect("cell contains face")
}

fn same_side<T: Scalar>(
    p: &[Point3<T>],
    cells: &[[usize; 4]],
    face: [usize; 3],
    pair: [usize; 2],
) -> bool {
    let [a, b, c] = face.map(|v| &p[v]);
    let sa = orient3_sign(a, b, c, &p[apex(&cells[pair[0]], &face)]);
    let sb = orient3_sign(a, b, c, &p[apex(&cells[pair[1]], &face)]);
    sa == sb
}

/// Cells whose closure contains a foreign vertex, found through a uniform
/// bucket grid over bounding boxes and confirmed with orientation tests.
fn hanging_vertices<T: Scalar>(mesh: &Mesh3, p: &[Point3<T>]) -> Vec<Violation> {
    let pf: Vec<[f64; 3]> = (0..p.len()).map(|i| mesh.point_f64(i)).collect();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for x in &pf {
        for k in 0..3 {
            lo[k] = lo[k].min(x[k]);
            hi[k] = hi[k].max(x[k]);
        }
    }
    let res = ((mesh.n_cells() as f64).cbrt().ceil() as usize).clamp(1, 64);
    let span: [f64; 3] = std::array::from_fn(|k| (hi[k] - lo[k]).max(f64::MIN_POSITIVE));
    let eps = 1e-9 * span.iter().cloned().fold(0.0, f64::max);
    let bucket = |x: f64, k: usize| -> usize {
        (((x - lo[k]) / span[k] * res as f64).floor().max(0.0) as usize).min(res - 1)
    };
    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); res * res * res];
    for (ci, c) in mesh.cells().iter().enumerate() {
        let mut cmin = [f64::INFINITY; 3];
        let mut cmax = [f64::NEG_INFINITY; 3];
        for &v in c {
            for k in 0..3 {
                cmin[k] = cmin[k].min(pf[v][k]);
                cmax[k] = cmax[k].max(pf[v][k]);
            }
        }
        let r: [(usize, usize); 3] =
            std::array::from_fn(|k| (bucket(cmin[k] - eps, k), bucket(cmax[k] + eps, k)));
        for i in r[0].0..=r[0].1 {
            for j in r[1].0..=r[1].1 {
                for l in r[2].0..=r[2].1 {
                    grid[(i * res + j) * res + l].push(ci);
                }
            }
        }
    }

    let mut out = Vec::new();
    for (v, x) in pf.iter().enumerate() {
        let b = (bucket(x[0], 0) * res + bucket(x[1], 1)) * res + bucket(x[2], 2);
        for &ci in &grid[b] {
            let c = &mesh.cells()[ci];
            if c.contains(&v) {
                continue;
            }
            let q = &p[v];
            let [a0, a1, a2, a3] = c.map(|i| &p[i]);
            let inside = [
                orient3_sign(q, a1, a2, a3),
                orient3_sign(a0, q, a2, a3),
                orient3_sign(a0, a1, q, a3),
                orient3_sign(a0, a1, a2, q),
            ]
            .iter()
            .all(|&s| s != Ordering::Less);
            if inside {
                out.push(Violation::HangingVertex {
                    vertex: v,
                    cell: ci,
                });
            }
        }
    }
    out
}
