//! Singular edge detection.
//!
//! An edge is singular when the faces around it lie in exactly two planes.
//! For an interior edge this means four faces forming two coplanar opposite
//! pairs. For a boundary edge it means three faces: the two boundary faces
//! are coplanar and the single interior face spans the second plane.

use crate::geometry::{cross3, dot3, sub3, Point3, Scalar};
use crate::mesh::{Coords, Mesh3};

/// Indices (into the edge table) of the singular edges. `tol` is the
/// relative tolerance on normalized triple products in floating point mode
/// and is ignored for exact coordinates.
pub fn singular_edges(mesh: &Mesh3, tol: f64) -> Vec<usize> {
    match mesh.coords() {
        Coords::Exact(p) => find(mesh, p, tol),
        Coords::Float(p) => find(mesh, p, tol),
    }
}

fn coplanar<T: Scalar>(p: &[Point3<T>], a: usize, b: usize, c: usize, d: usize, tol: f64) -> bool {
    let u = sub3(&p[b], &p[a]);
    let v = sub3(&p[c], &p[a]);
    let w = sub3(&p[d], &p[a]);
    let t = dot3(&u, &cross3(&v, &w));
    if T::EXACT {
        return t.is_zero();
    }
    let n = |x: &Point3<T>| x.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt();
    t.to_f64().abs() <= tol * n(&u) * n(&v) * n(&w)
}

fn find<T: Scalar>(mesh: &Mesh3, p: &[Point3<T>], tol: f64) -> Vec<usize> {
    let t = mesh.tables();
    let mut out = Vec::new();
    for (ei, faces) in t.edge_faces.iter().enumerate() {
        let [a, b] = t.edges[ei];
        let apex = |f: usize| {
            *t.faces[f]
                .iter()
                .find(|&&v| v != a && v != b)
                .expect("face contains edge")
        };
        let singular = if t.edge_boundary[ei] {
            let (bnd, inner): (Vec<usize>, Vec<usize>) =
                faces.iter().partition(|&&f| t.face_boundary[f]);
            faces.len() == 3
                && bnd.len() == 2
                && inner.len() == 1
                && coplanar(p, a, b, apex(bnd[0]), apex(bnd[1]), tol)
        } else if faces.len() == 4 {
            let c: Vec<usize> = faces.iter().map(|&f| apex(f)).collect();
            [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]]
                .iter()
                .any(|&[i, j, k, l]| {
                    coplanar(p, a, b, c[i], c[j], tol) && coplanar(p, a, b, c[k], c[l], tol)
                })
        } else {
            false
        };
        if singular {
            out.push(ei);
        }
    }
    out
}
