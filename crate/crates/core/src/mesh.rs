//! The immutable tetrahedral mesh and its derived entity tables.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::geometry::{orient3_sign, Point3, Scalar};

/// Vertex coordinates. A mesh is uniformly exact or uniformly floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords<const D: usize> {
    Exact(Vec<[BigRational; D]>),
    Float(Vec<[f64; D]>),
}

impl<const D: usize> Coords<D> {
    pub fn len(&self) -> usize {
        match self {
            Coords::Exact(p) => p.len(),
            Coords::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coords::Exact(_))
    }

    pub fn point_f64(&self, i: usize) -> [f64; D] {
        match self {
            Coords::Exact(p) => std::array::from_fn(|k| p[i][k].to_f64()),
            Coords::Float(p) => p[i],
        }
    }

    pub fn to_float(&self) -> Coords<D> {
        match self {
            Coords::Exact(p) => Coords::Float(
                p.iter()
                    .map(|x| std::array::from_fn(|k| x[k].to_f64()))
                    .collect(),
            ),
            Coords::Float(p) => Coords::Float(p.clone()),
        }
    }

    /// Builds exact coordinates from small integers.
    pub fn from_integers(points: &[[i64; D]]) -> Coords<D> {
        Coords::Exact(
            points
                .iter()
                .map(|p| std::array::from_fn(|k| BigRational::from_i64(p[k])))
                .collect(),
        )
    }
}

/// Sorted-vertex key of a cell, edge or face.
pub(crate) fn sorted<const N: usize>(mut v: [usize; N]) -> [usize; N] {
    v.sort_unstable();
    v
}

/// Local vertex pairs of a tetrahedron, in the order used by
/// [`EntityTables::cell_edges`].
pub const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Incidence tables of a tetrahedral mesh. Edges and faces are sorted vertex
/// tuples in lexicographic order.
#[derive(Clone, Debug)]
pub struct EntityTables {
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<[usize; 3]>,
    /// Edge indices of each cell in [`TET_EDGES`] order.
    pub cell_edges: Vec<[usize; 6]>,
    /// Face indices of each cell; entry `i` is the face opposite local vertex `i`.
    pub cell_faces: Vec<[usize; 4]>,
    pub face_cells: Vec<Vec<usize>>,
    pub edge_faces: Vec<Vec<usize>>,
    pub edge_cells: Vec<Vec<usize>>,
    pub vertex_boundary: Vec<bool>,
    pub edge_boundary: Vec<bool>,
    pub face_boundary: Vec<bool>,
}

impl EntityTables {
    fn build(n_vertices: usize, cells: &[[usize; 4]]) -> EntityTables {
        let mut edges: Vec<[usize; 2]> = cells
            .iter()
            .flat_map(|c| TET_EDGES.map(|[a, b]| sorted([c[a], c[b]])))
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let mut faces: Vec<[usize; 3]> = cells
            .iter()
            .flat_map(|c| (0..4).map(move |i| opposite_face(c, i)))
            .collect();
        faces.sort_unstable();
        faces.dedup();

        let edge_index = |e: [usize; 2]| edges.binary_search(&e).expect("edge table is complete");
        let face_index = |f: [usize; 3]| faces.binary_search(&f).expect("face table is complete");

        let cell_edges: Vec<[usize; 6]> = cells
            .iter()
            .map(|c| TET_EDGES.map(|[a, b]| edge_index(sorted([c[a], c[b]]))))
            .collect();
        let cell_faces: Vec<[usize; 4]> = cells
            .iter()
            .map(|c| std::array::from_fn(|i| face_index(opposite_face(c, i))))
            .collect();

        let mut face_cells = vec![Vec::new(); faces.len()];
        let mut edge_cells = vec![Vec::new(); edges.len()];
        for (ci, (fs, es)) in cell_faces.iter().zip(&cell_edges).enumerate() {
            for &f in fs {
                face_cells[f].push(ci);
            }
            for &e in es {
                edge_cells[e].push(ci);
            }
        }

        let mut edge_faces = vec![Vec::new(); edges.len()];
        for (fi, f) in faces.iter().enumerate() {
            for e in [[f[0], f[1]], [f[0], f[2]], [f[1], f[2]]] {
                edge_faces[edge_index(e)].push(fi);
            }
        }

        let face_boundary: Vec<bool> = face_cells.iter().map(|c| c.len() == 1).collect();
        let mut edge_boundary = vec![false; edges.len()];
        let mut vertex_boundary = vec![false; n_vertices];
        for (fi, f) in faces.iter().enumerate() {
            if !face_boundary[fi] {
                continue;
            }
            for e in [[f[0], f[1]], [f[0], f[2]], [f[1], f[2]]] {
                edge_boundary[edge_index(e)] = true;
            }
            for &v in f {
                vertex_boundary[v] = true;
            }
        }

        EntityTables {
            edges,
            faces,
            cell_edges,
            cell_faces,
            face_cells,
            edge_faces,
            edge_cells,
            vertex_boundary,
            edge_boundary,
            face_boundary,
        }
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&sorted([a, b])).ok()
    }

    pub fn face_index(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.faces.binary_search(&sorted([a, b, c])).ok()
    }
}

pub(crate) fn opposite_face(c: &[usize; 4], i: usize) -> [usize; 3] {
    let mut f = [0; 3];
    let mut k = 0;
    for (j, &v) in c.iter().enumerate() {
        if j != i {
            f[k] = v;
            k += 1;
        }
    }
    sorted(f)
}

/// A conforming tetrahedral mesh. Cells are positively oriented; entity
/// tables are computed on first use.
#[derive(Clone, Debug)]
pub struct Mesh3 {
    coords: Coords<3>,
    cells: Vec<[usize; 4]>,
    orientation_fixes: usize,
    tables: OnceLock<EntityTables>,
}

impl Mesh3 {
    /// Validates and orientation-normalizes a cell list. Negatively oriented
    /// cells get their last two vertices swapped.
    pub fn build(coords: Coords<3>, cells: Vec<[usize; 4]>) -> Result<Mesh3> {
        if coords.is_empty() || cells.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let n = coords.len();
        let mut cells = cells;
        let mut seen: HashMap<[usize; 4], usize> = HashMap::with_capacity(cells.len());
        let mut fixes = 0;
        for (ci, c) in cells.iter_mut().enumerate() {
            if let Some(&index) = c.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    cell: ci,
                    index,
                    len: n,
                });
            }
            let key = sorted(*c);
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DegenerateCell { cell: ci });
            }
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateCell { cell: ci, first });
            }
            seen.insert(key, ci);
            let sign = match &coords {
                Coords::Exact(p) => cell_orientation(p, c),
                Coords::Float(p) => cell_orientation(p, c),
            };
            match sign {
                Ordering::Equal => return Err(Error::DegenerateCell { cell: ci }),
                Ordering::Less => {
                    c.swap(2, 3);
                    fixes += 1;
                }
                Ordering::Greater => {}
            }
        }
        Ok(Mesh3 {
            coords,
            cells,
            orientation_fixes: fixes,
            tables: OnceLock::new(),
        })
    }

    pub fn coords(&self) -> &Coords<3> {
        &self.coords
    }

    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn is_exact(&self) -> bool {
        self.coords.is_exact()
    }

    /// Number of input cells whose orientation was flipped by [`Mesh3::build`].
    pub fn orientation_fixes(&self) -> usize {
        self.orientation_fixes
    }

    pub fn tables(&self) -> &EntityTables {
        self.tables
            .get_or_init(|| EntityTables::build(self.coords.len(), &self.cells))
    }

    pub fn point_f64(&self, v: usize) -> [f64; 3] {
        self.coords.point_f64(v)
    }
}

pub(crate) fn cell_orientation<T: Scalar>(p: &[Point3<T>], c: &[usize; 4]) -> Ordering {
    orient3_sign(&p[c[0]], &p[c[1]], &p[c[2]], &p[c[3]])
}
