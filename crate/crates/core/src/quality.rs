//! Solid angles at cell corners.

use std::f64::consts::PI;

use crate::counts::vertex_stars;
use crate::error::{Error, Result};
use crate::geometry::{orient3, solid_angle, FLOAT_REL_TOL};
use crate::mesh::Mesh3;

#[derive(Clone, Debug, PartialEq)]
pub struct VertexAngles {
    pub min: f64,
    pub mean: f64,
    pub sum: f64,
    pub cells: usize,
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolidAngleStats {
    /// `per_cell[c][i]` is the solid angle of cell `c` at its local vertex `i`.
    pub per_cell: Vec<[f64; 4]>,
    pub per_vertex: Vec<VertexAngles>,
    /// Smallest solid angle in the mesh.
    pub min: f64,
}

impl SolidAngleStats {
    /// Edge count of an interior vertex recovered from its mean solid angle,
    /// `2 + 2π/ᾱ`.
    pub fn edges_from_mean_angle(&self, vertex: usize) -> f64 {
        2.0 + 2.0 * PI / self.per_vertex[vertex].mean
    }
}

pub fn solid_angles(mesh: &Mesh3) -> Result<SolidAngleStats> {
    let mut per_cell = Vec::with_capacity(mesh.n_cells());
    for (ci, c) in mesh.cells().iter().enumerate() {
        let p = c.map(|v| mesh.point_f64(v));
        let vol = orient3(&p[0], &p[1], &p[2], &p[3]);
        let edge_scale: f64 = (1..4)
            .map(|j| ((0..3).map(|k| (p[j][k] - p[0][k]).powi(2)).sum::<f64>()).sqrt())
            .product();
        if vol <= FLOAT_REL_TOL * edge_scale {
            return Err(Error::DegenerateAngle { cell: ci });
        }
        per_cell.push([
            solid_angle(p[0], p[1], p[2], p[3]),
            solid_angle(p[1], p[0], p[2], p[3]),
            solid_angle(p[2], p[0], p[1], p[3]),
            solid_angle(p[3], p[0], p[1], p[2]),
        ]);
    }

    let stars = vertex_stars(mesh);
    let mut per_vertex: Vec<VertexAngles> = stars
        .iter()
        .map(|s| VertexAngles {
            min: f64::INFINITY,
            mean: 0.0,
            sum: 0.0,
            cells: s.cells,
            interior: s.interior,
        })
        .collect();
    for (c, angles) in mesh.cells().iter().zip(&per_cell) {
        for (&v, &a) in c.iter().zip(angles) {
            let va = &mut per_vertex[v];
            va.sum += a;
            va.min = va.min.min(a);
        }
    }
    for va in &mut per_vertex {
        va.mean = if va.cells > 0 {
            va.sum / va.cells as f64
        } else {
            f64::NAN
        };
    }
    let min = per_vertex
        .iter()
        .map(|v| v.min)
        .fold(f64::INFINITY, f64::min);
    Ok(SolidAngleStats {
        per_cell,
        per_vertex,
        min,
    })
}
