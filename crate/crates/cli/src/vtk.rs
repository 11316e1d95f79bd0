//! Legacy VTK 2.0 ASCII unstructured grids.

use std::fmt::Write as _;

use tetra_census::{Coords, Mesh2, Mesh3};

use crate::tmesh::AnyMesh;

const VTK_TRIANGLE: u8 = 5;
const VTK_TETRA: u8 = 10;

fn points<const D: usize>(out: &mut String, n: usize, c: &Coords<D>) {
    let _ = writeln!(out, "POINTS {n} double");
    for i in 0..n {
        let p = c.point_f64(i);
        let z = if D == 3 { p[2] } else { 0.0 };
        let _ = writeln!(out, "{:?} {:?} {z:?}", p[0], p[1]);
    }
}

fn cells<const N: usize>(out: &mut String, cells: &[[usize; N]], kind: u8) {
    let _ = writeln!(out, "CELLS {} {}", cells.len(), cells.len() * (N + 1));
    for c in cells {
        let ids: Vec<String> = c.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{N} {}", ids.join(" "));
    }
    let _ = writeln!(out, "CELL_TYPES {}", cells.len());
    for _ in cells {
        let _ = writeln!(out, "{kind}");
    }
}

fn header(out: &mut String) {
    out.push_str(
        "# vtk DataFile Version 2.0\ntetra-census mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n",
    );
}

pub fn write(mesh: &AnyMesh) -> String {
    let mut out = String::new();
    header(&mut out);
    match mesh {
        AnyMesh::Tet(m) => tets(&mut out, m),
        AnyMesh::Tri(m) => tris(&mut out, m),
    }
    out
}

fn tets(out: &mut String, m: &Mesh3) {
    points(out, m.n_vertices(), m.coords());
    cells(out, m.cells(), VTK_TETRA);
}

fn tris(out: &mut String, m: &Mesh2) {
    points(out, m.n_vertices(), m.coords());
    cells(out, m.cells(), VTK_TRIANGLE);
}
