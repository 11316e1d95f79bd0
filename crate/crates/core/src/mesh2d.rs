//! Triangle meshes: counting, Alfeld and Powell–Sabin splits, red
//! refinement, and dimensions of 2D divergence-free pairs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fespace::PressureExactness;
use crate::geometry::{centroid, orient2, orient2_sign, Point2, Scalar};
use crate::mesh::{sorted, Coords};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EntityTables2 {
    pub edges: Vec<[usize; 2]>,
    /// `cell_edges[c][i]` is the edge opposite local vertex `i`.
    pub cell_edges: Vec<[usize; 3]>,
    pub edge_cells: Vec<Vec<usize>>,
    pub vertex_boundary: Vec<bool>,
    pub edge_boundary: Vec<bool>,
}

impl EntityTables2 {
    fn build(n_vertices: usize, cells: &[[usize; 3]]) -> Self {
        let mut edges: Vec<[usize; 2]> = cells
            .iter()
            .flat_map(|c| (0..3).map(move |i| sorted([c[(i + 1) % 3], c[(i + 2) % 3]])))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let index = |e: [usize; 2]| edges.binary_search(&sorted(e)).expect("edge present");
        let cell_edges: Vec<[usize; 3]> = cells
            .iter()
            .map(|c| std::array::from_fn(|i| index([c[(i + 1) % 3], c[(i + 2) % 3]])))
            .collect();
        let mut edge_cells = vec![Vec::new(); edges.len()];
        for (ci, ce) in cell_edges.iter().enumerate() {
            for &e in ce {
                edge_cells[e].push(ci);
            }
        }
        let edge_boundary: Vec<bool> = edge_cells.iter().map(|c| c.len() == 1).collect();
        let mut vertex_boundary = vec![false; n_vertices];
        for (e, &b) in edges.iter().zip(&edge_boundary) {
            if b {
                vertex_boundary[e[0]] = true;
                vertex_boundary[e[1]] = true;
            }
        }
        EntityTables2 {
            edges,
            cell_edges,
            edge_cells,
            vertex_boundary,
            edge_boundary,
        }
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&sorted([a, b])).ok()
    }
}

#[derive(Debug)]
pub struct Mesh2 {
    coords: Coords<2>,
    cells: Vec<[usize; 3]>,
    orientation_fixes: usize,
    tables: OnceLock<EntityTables2>,
}

impl Clone for Mesh2 {
    fn clone(&self) -> Self {
        Mesh2 {
            coords: self.coords.clone(),
            cells: self.cells.clone(),
            orientation_fixes: self.orientation_fixes,
            tables: OnceLock::new(),
        }
    }
}

impl PartialEq for Mesh2 {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords && self.cells == o.cells
    }
}

fn cell_orientation2<T: Scalar>(p: &[Point2<T>], c: &[usize; 3]) -> Ordering {
    orient2_sign(&p[c[0]], &p[c[1]], &p[c[2]])
}

impl Mesh2 {
    /// Validates and orients the triangles counterclockwise.
    pub fn build(coords: Coords<2>, mut cells: Vec<[usize; 3]>) -> Result<Mesh2> {
        if coords.is_empty() || cells.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let n = coords.len();
        let mut seen = HashMap::new();
        for (ci, c) in cells.iter().enumerate() {
            if let Some(&index) = c.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    cell: ci,
                    index,
                    len: n,
                });
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::DegenerateCell { cell: ci });
            }
            if let Some(&first) = seen.get(&sorted(*c)) {
                return Err(Error::DuplicateCell { cell: ci, first });
            }
            seen.insert(sorted(*c), ci);
        }
        let mut fixes = 0;
        for (ci, c) in cells.iter_mut().enumerate() {
            let o = match &coords {
                Coords::Exact(p) => cell_orientation2(p, c),
                Coords::Float(p) => cell_orientation2(p, c),
            };
            match o {
                Ordering::Equal => return Err(Error::DegenerateCell { cell: ci }),
                Ordering::Less => {
                    c.swap(1, 2);
                    fixes += 1;
                }
                Ordering::Greater => {}
            }
        }
        Ok(Mesh2 {
            coords,
            cells,
            orientation_fixes: fixes,
            tables: OnceLock::new(),
        })
    }

    pub fn coords(&self) -> &Coords<2> {
        &self.coords
    }

    pub fn cells(&self) -> &[[usize; 3]] {
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

    pub fn orientation_fixes(&self) -> usize {
        self.orientation_fixes
    }

    pub fn tables(&self) -> &EntityTables2 {
        self.tables
            .get_or_init(|| EntityTables2::build(self.coords.len(), &self.cells))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeshCounts2 {
    pub v: i64,
    pub e: i64,
    pub t: i64,
    pub vb: i64,
    pub eb: i64,
}

impl MeshCounts2 {
    pub fn new(v: i64, e: i64, t: i64, vb: i64, eb: i64) -> Self {
        MeshCounts2 { v, e, t, vb, eb }
    }

    pub fn chi(&self) -> i64 {
        self.v - self.e + self.t
    }

    pub fn chi_b(&self) -> i64 {
        self.vb - self.eb
    }

    pub fn ebar(&self) -> Option<Rational64> {
        (self.v != 0).then(|| Rational64::new(2 * self.e, self.v))
    }

    pub fn tbar(&self) -> Option<Rational64> {
        (self.v != 0).then(|| Rational64::new(3 * self.t, self.v))
    }

    /// `3T = 2E − E_b`.
    pub fn marble_identity_holds(&self) -> bool {
        3 * self.t == 2 * self.e - self.eb
    }
}

pub fn counts2(mesh: &Mesh2) -> MeshCounts2 {
    let t = mesh.tables();
    MeshCounts2 {
        v: mesh.n_vertices() as i64,
        e: t.edges.len() as i64,
        t: mesh.n_cells() as i64,
        vb: t.vertex_boundary.iter().filter(|&&b| b).count() as i64,
        eb: t.edge_boundary.iter().filter(|&&b| b).count() as i64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InteriorPoint2 {
    Barycenter,
    /// Weighted by edge lengths; switches to floating point coordinates.
    Incenter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split2Kind {
    Alfeld2,
    /// Alfeld split plus one point per edge: on interior edges where the
    /// segment between the neighbours' interior points crosses the edge, on
    /// boundary edges the midpoint.
    PowellSabin(InteriorPoint2),
}

impl Split2Kind {
    pub fn powell_sabin() -> Self {
        Split2Kind::PowellSabin(InteriorPoint2::Incenter)
    }
}

pub fn predict_split2(c: &MeshCounts2, kind: Split2Kind) -> MeshCounts2 {
    match kind {
        Split2Kind::Alfeld2 => MeshCounts2 {
            v: c.v + c.t,
            e: c.e + 3 * c.t,
            t: 3 * c.t,
            ..*c
        },
        Split2Kind::PowellSabin(_) => MeshCounts2 {
            v: c.v + c.e + c.t,
            e: 2 * c.e + 6 * c.t,
            t: 6 * c.t,
            vb: c.vb + c.eb,
            eb: 2 * c.eb,
        },
    }
}

pub fn split2(mesh: &Mesh2, kind: Split2Kind) -> Result<Mesh2> {
    let (coords, cells) = match (mesh.coords(), kind) {
        (Coords::Exact(p), Split2Kind::Alfeld2)
        | (Coords::Exact(p), Split2Kind::PowellSabin(InteriorPoint2::Barycenter)) => {
            let (pts, cells) = split2_with(mesh, p, kind, |c| barycenter2(p, c))?;
            (Coords::Exact(pts), cells)
        }
        (Coords::Float(p), Split2Kind::Alfeld2)
        | (Coords::Float(p), Split2Kind::PowellSabin(InteriorPoint2::Barycenter)) => {
            let (pts, cells) = split2_with(mesh, p, kind, |c| barycenter2(p, c))?;
            (Coords::Float(pts), cells)
        }
        (coords, Split2Kind::PowellSabin(InteriorPoint2::Incenter)) => {
            let Coords::Float(p) = coords.to_float() else {
                unreachable!("to_float yields float coordinates")
            };
            let (pts, cells) = split2_with(mesh, &p, kind, |c| incenter2(&p, c))?;
            (Coords::Float(pts), cells)
        }
    };
    Mesh2::build(coords, cells)
}

fn barycenter2<T: Scalar>(p: &[Point2<T>], c: &[usize; 3]) -> Point2<T> {
    centroid(&c.map(|v| &p[v]))
}

fn incenter2(p: &[Point2<f64>], c: &[usize; 3]) -> Point2<f64> {
    let len = |a: usize, b: usize| (p[a][0] - p[b][0]).hypot(p[a][1] - p[b][1]);
    let w = [len(c[1], c[2]), len(c[2], c[0]), len(c[0], c[1])];
    let total: f64 = w.iter().sum();
    std::array::from_fn(|k| (0..3).map(|i| w[i] * p[c[i]][k]).sum::<f64>() / total)
}

type Split2<T> = (Vec<Point2<T>>, Vec<[usize; 3]>);

fn split2_with<T: Scalar>(
    mesh: &Mesh2,
    p: &[Point2<T>],
    kind: Split2Kind,
    interior: impl Fn(&[usize; 3]) -> Point2<T>,
) -> Result<Split2<T>> {
    let n = p.len();
    let cells = mesh.cells();
    let mut points = p.to_vec();
    points.extend(cells.iter().map(&interior));
    let mut out = Vec::new();
    match kind {
        Split2Kind::Alfeld2 => {
            for (ci, c) in cells.iter().enumerate() {
                for i in 0..3 {
                    let mut child = *c;
                    child[i] = n + ci;
                    out.push(child);
                }
            }
        }
        Split2Kind::PowellSabin(_) => {
            let t = mesh.tables();
            let edge_base = n + cells.len();
            let half = T::ratio(1, 2);
            for (ei, &[a, b]) in t.edges.iter().enumerate() {
                let q = match t.edge_cells[ei].as_slice() {
                    [_] => std::array::from_fn(|k| {
                        (points[a][k].clone() + points[b][k].clone()) * half.clone()
                    }),
                    &[c0, c1] => {
                        edge_crossing(&points[a], &points[b], &points[n + c0], &points[n + c1])
                            .ok_or_else(|| {
                                Error::Geometry(format!(
                                "the segment joining the interior points of triangles {c0} and \
                                 {c1} does not cross their common edge [{a}, {b}] strictly inside"
                            ))
                            })?
                    }
                    other => {
                        return Err(Error::Geometry(format!(
                            "edge [{a}, {b}] is shared by {} triangles",
                            other.len()
                        )))
                    }
                };
                points.push(q);
            }
            for (ci, c) in cells.iter().enumerate() {
                for i in 0..3 {
                    let mut sub = *c;
                    sub[i] = n + ci;
                    let q = edge_base + t.cell_edges[ci][i];
                    for j in [(i + 1) % 3, (i + 2) % 3] {
                        let mut child = sub;
                        child[j] = q;
                        out.push(child);
                    }
                }
            }
        }
    }
    Ok((points, out))
}

/// Intersection of segment `pa–pb` with the open segment `x–y`.
fn edge_crossing<T: Scalar>(
    x: &Point2<T>,
    y: &Point2<T>,
    pa: &Point2<T>,
    pb: &Point2<T>,
) -> Option<Point2<T>> {
    let sx = orient2_sign(pa, pb, x);
    let sy = orient2_sign(pa, pb, y);
    if sx == Ordering::Equal || sy == Ordering::Equal || sx == sy {
        return None;
    }
    let da = orient2(x, y, pa);
    let db = orient2(x, y, pb);
    let denom = da.clone() - db;
    if denom.is_zero() {
        return None;
    }
    let t = da / denom;
    Some(std::array::from_fn(|k| {
        pa[k].clone() + t.clone() * (pb[k].clone() - pa[k].clone())
    }))
}

/// Each triangle is cut into four by its edge midpoints.
pub fn refine_red2(mesh: &Mesh2) -> Mesh2 {
    fn with<T: Scalar>(mesh: &Mesh2, p: &[Point2<T>]) -> Split2<T> {
        let t = mesh.tables();
        let n = p.len();
        let half = T::ratio(1, 2);
        let mut points = p.to_vec();
        points.extend(t.edges.iter().map(|&[a, b]| {
            std::array::from_fn(|k| (p[a][k].clone() + p[b][k].clone()) * half.clone())
        }));
        let mut out = Vec::with_capacity(4 * mesh.n_cells());
        for (ci, c) in mesh.cells().iter().enumerate() {
            let m = t.cell_edges[ci].map(|e| n + e);
            out.push([c[0], m[2], m[1]]);
            out.push([m[2], c[1], m[0]]);
            out.push([m[1], m[0], c[2]]);
            out.push(m);
        }
        (points, out)
    }
    let (coords, cells) = match mesh.coords() {
        Coords::Exact(p) => {
            let (pts, cells) = with(mesh, p);
            (Coords::Exact(pts), cells)
        }
        Coords::Float(p) => {
            let (pts, cells) = with(mesh, p);
            (Coords::Float(pts), cells)
        }
    };
    Mesh2::build(coords, cells).expect("red refinement of a valid mesh is valid")
}

pub fn predict_red2(c: &MeshCounts2) -> MeshCounts2 {
    MeshCounts2 {
        v: c.v + c.e,
        e: 2 * c.e + 3 * c.t,
        t: 4 * c.t,
        vb: c.vb + c.eb,
        eb: 2 * c.eb,
    }
}

fn exact2(points: &[[i64; 2]], cells: Vec<[usize; 3]>) -> Mesh2 {
    Mesh2::build(Coords::from_integers(points), cells).expect("fixed 2D mesh is valid")
}

pub fn single_triangle() -> Mesh2 {
    exact2(&[[0, 0], [1, 0], [0, 1]], vec![[0, 1, 2]])
}

/// The unit square cut along one diagonal.
pub fn unit_square() -> Mesh2 {
    exact2(
        &[[0, 0], [1, 0], [1, 1], [0, 1]],
        vec![[0, 1, 2], [0, 2, 3]],
    )
}

/// The square `[0, 2]²` cut into four triangles around its center.
pub fn square4() -> Mesh2 {
    exact2(
        &[[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]],
        vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pair2 {
    /// Quadratic velocity on the Alfeld split, full linear pressure.
    Alfeld2K2,
    /// Linear velocity on the Powell–Sabin split.
    PsK1,
    /// Scott–Vogelius with quartic velocity on the original mesh.
    Sv2dK4,
}

impl std::str::FromStr for Pair2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alfeld2_k2" => Ok(Pair2::Alfeld2K2),
            "ps_k1" => Ok(Pair2::PsK1),
            "sv2d_k4" => Ok(Pair2::Sv2dK4),
            _ => Err(Error::UnsupportedPair(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport2 {
    pub pair: Pair2,
    pub dim_velocity: i64,
    pub dim_pressure_upper: i64,
    pub pressure_exactness: PressureExactness,
    pub dim_total: i64,
    /// Full discontinuous pressure space on the pair's mesh.
    pub dim_dg: i64,
    /// Per-vertex constants for large meshes (`E ≈ 3V`, `T ≈ 2V`).
    pub asymptotic_velocity: Rational64,
    pub asymptotic_pressure_upper: Rational64,
    /// Velocity plus the full discontinuous pressure space.
    pub asymptotic_total: Rational64,
}

/// Dimensions on a triangle mesh with the given (unsplit) counts.
pub fn dims2(pair: Pair2, c: &MeshCounts2) -> DimReport2 {
    // (velocity, pressure upper, dg) as coefficients of (V, E, T).
    let (vel, press, dg, exactness) = match pair {
        Pair2::Alfeld2K2 => ([2, 2, 8], [0, 0, 9], [0, 0, 9], PressureExactness::Exact),
        Pair2::PsK1 => (
            [2, 2, 2],
            [0, -1, 6],
            [0, 0, 6],
            PressureExactness::UpperBound,
        ),
        Pair2::Sv2dK4 => (
            [2, 6, 6],
            [0, 0, 10],
            [0, 0, 10],
            PressureExactness::FullDgProxy,
        ),
    };
    let exact = |x: [i64; 3]| x[0] * c.v + x[1] * c.e + x[2] * c.t;
    let asym = |x: [i64; 3]| Rational64::from_integer(x[0] + 3 * x[1] + 2 * x[2]);
    DimReport2 {
        pair,
        dim_velocity: exact(vel),
        dim_pressure_upper: exact(press),
        pressure_exactness: exactness,
        dim_total: exact(vel) + exact(press),
        dim_dg: exact(dg),
        asymptotic_velocity: asym(vel),
        asymptotic_pressure_upper: asym(press),
        asymptotic_total: asym(vel) + asym(dg),
    }
}

/// Limit of `2E/V` under repeated 2D red refinement.
pub fn ebar_limit2() -> Rational64 {
    // Dominant eigenvector of the (V, E, T) transfer matrix for eigenvalue 4.
    let t = Rational64::from_integer(1);
    let e = Rational64::from_integer(3) * t / Rational64::from_integer(4 - 2);
    let v = e / Rational64::from_integer(4 - 1);
    Rational64::from_integer(2) * e / v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_counts() {
        let c = counts2(&unit_square());
        assert_eq!(c, MeshCounts2::new(4, 5, 2, 4, 4));
        assert_eq!((c.chi(), c.chi_b()), (1, 0));
        assert!(c.marble_identity_holds());
    }

    #[test]
    fn splits_of_a_triangle() {
        let m = single_triangle();
        let a = split2(&m, Split2Kind::Alfeld2).unwrap();
        assert_eq!(counts2(&a), MeshCounts2::new(4, 6, 3, 3, 3));
        for kind in [
            Split2Kind::powell_sabin(),
            Split2Kind::PowellSabin(InteriorPoint2::Barycenter),
        ] {
            let p = split2(&m, kind).unwrap();
            assert_eq!(p.orientation_fixes(), 0);
            let c = counts2(&p);
            assert_eq!((c.v, c.e, c.t), (7, 12, 6));
            assert_eq!(c.chi(), 1);
        }
    }

    #[test]
    fn split_predictions_on_square4() {
        let m = square4();
        let c = counts2(&m);
        for kind in [
            Split2Kind::Alfeld2,
            Split2Kind::powell_sabin(),
            Split2Kind::PowellSabin(InteriorPoint2::Barycenter),
        ] {
            assert_eq!(
                counts2(&split2(&m, kind).unwrap()),
                predict_split2(&c, kind)
            );
        }
    }

    #[test]
    fn red_refinement() {
        let m = unit_square();
        let r = refine_red2(&m);
        assert_eq!(r.orientation_fixes(), 0);
        assert_eq!(counts2(&r), predict_red2(&counts2(&m)));
        assert_eq!(ebar_limit2(), Rational64::from_integer(6));
    }

    #[test]
    fn pair_dims() {
        let c = MeshCounts2::new(3, 3, 1, 3, 3);
        let r = dims2(Pair2::PsK1, &c);
        assert_eq!((r.dim_velocity, r.dim_pressure_upper, r.dim_dg), (14, 3, 6));
        assert_eq!(r.asymptotic_total, Rational64::from_integer(24));
        assert_eq!(r.asymptotic_pressure_upper, Rational64::from_integer(9));
        assert_eq!(
            dims2(Pair2::Alfeld2K2, &c).asymptotic_total,
            Rational64::from_integer(42)
        );
        assert_eq!(
            dims2(Pair2::Sv2dK4, &c).asymptotic_total,
            Rational64::from_integer(52)
        );
        assert!("ps_k2".parse::<Pair2>().is_err());
    }

    #[test]
    fn build_errors() {
        let c = Coords::from_integers(&[[0, 0], [1, 0], [2, 0]]);
        assert_eq!(
            Mesh2::build(c.clone(), vec![[0, 1, 2]]).unwrap_err(),
            Error::DegenerateCell { cell: 0 }
        );
        assert!(matches!(
            Mesh2::build(c, vec![[0, 1, 3]]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
