//! Alfeld and Worsey–Farin splits of tetrahedral meshes.
//!
//! New vertices are numbered after the original ones: first one block with
//! a point per cell (in cell order), then for Worsey–Farin one block with a
//! point per face (in face-table order).

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::counts::MeshCounts;
use crate::error::{Error, Result};
use crate::geometry::{centroid, cross3, orient3, orient3_sign, sub3, Point3, Scalar};
use crate::mesh::{Coords, Mesh3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitFamily {
    /// One interior point per cell, four children.
    Alfeld,
    /// Alfeld split plus one point per face, twelve children.
    WorseyFarin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InteriorPoint {
    Barycenter,
    /// Weighted by face areas; irrational in general, so the split mesh
    /// switches to floating point coordinates.
    Incenter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SplitKind {
    pub family: SplitFamily,
    pub interior_point: InteriorPoint,
}

impl SplitKind {
    pub fn alfeld() -> Self {
        SplitKind {
            family: SplitFamily::Alfeld,
            interior_point: InteriorPoint::Barycenter,
        }
    }

    /// Worsey–Farin with incenters, for which the segment between the
    /// interior points of two neighbours always crosses their common face.
    pub fn worsey_farin() -> Self {
        SplitKind {
            family: SplitFamily::WorseyFarin,
            interior_point: InteriorPoint::Incenter,
        }
    }

    pub fn with_interior_point(self, interior_point: InteriorPoint) -> Self {
        SplitKind {
            interior_point,
            ..self
        }
    }

    /// True when splitting an exact mesh keeps exact coordinates.
    pub fn preserves_exactness(&self) -> bool {
        self.interior_point == InteriorPoint::Barycenter
    }
}

/// Counts of the split mesh predicted from the counts of the original.
pub fn predict_split_counts(c: &MeshCounts, kind: SplitKind) -> MeshCounts {
    match kind.family {
        SplitFamily::Alfeld => MeshCounts {
            v: c.v + c.t,
            e: c.e + 4 * c.t,
            f: c.f + 6 * c.t,
            t: 4 * c.t,
            ..*c
        },
        SplitFamily::WorseyFarin => MeshCounts {
            v: c.v + c.f + c.t,
            e: c.e + 3 * c.f + 8 * c.t,
            f: 3 * c.f + 18 * c.t,
            t: 12 * c.t,
            vb: c.vb + c.fb,
            eb: c.eb + 3 * c.fb,
            fb: 3 * c.fb,
        },
    }
}

pub fn split(mesh: &Mesh3, kind: SplitKind) -> Result<Mesh3> {
    let (coords, cells) = match (mesh.coords(), kind.interior_point) {
        (Coords::Exact(p), InteriorPoint::Barycenter) => {
            let (pts, cells) = split_with(mesh, p, kind.family, |c| barycenter(p, c))?;
            (Coords::Exact(pts), cells)
        }
        (Coords::Float(p), InteriorPoint::Barycenter) => {
            let (pts, cells) = split_with(mesh, p, kind.family, |c| barycenter(p, c))?;
            (Coords::Float(pts), cells)
        }
        (coords, InteriorPoint::Incenter) => {
            let Coords::Float(p) = coords.to_float() else {
                unreachable!("to_float yields float coordinates")
            };
            let (pts, cells) = split_with(mesh, &p, kind.family, |c| incenter(&p, c))?;
            (Coords::Float(pts), cells)
        }
    };
    Mesh3::build(coords, cells)
}

fn barycenter<T: Scalar>(p: &[Point3<T>], c: &[usize; 4]) -> Point3<T> {
    centroid(&c.map(|v| &p[v]))
}

fn incenter(p: &[Point3<f64>], c: &[usize; 4]) -> Point3<f64> {
    let area = |i: usize| {
        let f: Vec<usize> = (0..4).filter(|&j| j != i).map(|j| c[j]).collect();
        let n = cross3(&sub3(&p[f[1]], &p[f[0]]), &sub3(&p[f[2]], &p[f[0]]));
        (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
    };
    let w: [f64; 4] = std::array::from_fn(area);
    let total: f64 = w.iter().sum();
    std::array::from_fn(|k| (0..4).map(|i| w[i] * p[c[i]][k]).sum::<f64>() / total)
}

type Split<T> = (Vec<Point3<T>>, Vec<[usize; 4]>);

fn split_with<T: Scalar>(
    mesh: &Mesh3,
    p: &[Point3<T>],
    family: SplitFamily,
    interior: impl Fn(&[usize; 4]) -> Point3<T>,
) -> Result<Split<T>> {
    let n = p.len();
    let cells = mesh.cells();
    let mut points: Vec<Point3<T>> = p.to_vec();
    points.extend(cells.iter().map(&interior));

    match family {
        SplitFamily::Alfeld => {
            let mut out = Vec::with_capacity(4 * cells.len());
            for (ci, c) in cells.iter().enumerate() {
                for i in 0..4 {
                    let mut child = *c;
                    child[i] = n + ci;
                    out.push(child);
                }
            }
            Ok((points, out))
        }
        SplitFamily::WorseyFarin => {
            let t = mesh.tables();
            let face_base = n + cells.len();
            for (fi, face) in t.faces.iter().enumerate() {
                let fp = match t.face_cells[fi].as_slice() {
                    [_] => centroid(&face.map(|v| &points[v])),
                    &[c0, c1] => face_crossing(&points, *face, &points[n + c0], &points[n + c1])
                        .ok_or_else(|| {
                            Error::Geometry(format!(
                                "the segment joining the interior points of cells {c0} and \
                                     {c1} does not cross their common face {face:?} strictly \
                                     inside"
                            ))
                        })?,
                    other => {
                        return Err(Error::Geometry(format!(
                            "face {face:?} is shared by {} cells",
                            other.len()
                        )))
                    }
                };
                points.push(fp);
            }
            let mut out = Vec::with_capacity(12 * cells.len());
            for (ci, c) in cells.iter().enumerate() {
                for i in 0..4 {
                    let mut sub = *c;
                    sub[i] = n + ci;
                    let fp = face_base + t.cell_faces[ci][i];
                    for j in (0..4).filter(|&j| j != i) {
                        let mut child = sub;
                        child[j] = fp;
                        out.push(child);
                    }
                }
            }
            Ok((points, out))
        }
    }
}

/// Intersection of segment `a–b` with the triangle `face`, if the segment
/// passes through the open triangle.
fn face_crossing<T: Scalar>(
    p: &[Point3<T>],
    face: [usize; 3],
    a: &Point3<T>,
    b: &Point3<T>,
) -> Option<Point3<T>> {
    let [x, y, z] = face.map(|v| &p[v]);
    let s = [
        orient3_sign(a, b, x, y),
        orient3_sign(a, b, y, z),
        orient3_sign(a, b, z, x),
    ];
    if s[0] == Ordering::Equal || s.iter().any(|&si| si != s[0]) {
        return None;
    }
    let da = orient3(x, y, z, a);
    let db = orient3(x, y, z, b);
    let denom = da.clone() - db;
    if denom.is_zero() {
        return None;
    }
    let t = da / denom;
    Some(std::array::from_fn(|k| {
        a[k].clone() + t.clone() * (b[k].clone() - a[k].clone())
    }))
}

/// Exact total volume (times six) of an exact mesh.
pub fn total_volume6(mesh: &Mesh3) -> Option<BigRational> {
    match mesh.coords() {
        Coords::Exact(p) => Some(
            mesh.cells()
                .iter()
                .map(|c| orient3(&p[c[0]], &p[c[1]], &p[c[2]], &p[c[3]]))
                .fold(BigRational::from_i64(0), |a, b| a + b),
        ),
        Coords::Float(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::counts;
    use crate::generators::{generate, two_tets, GeneratorSpec};

    #[test]
    fn alfeld_single_tet() {
        let m = generate(&GeneratorSpec::single_tet()).unwrap();
        let a = split(&m, SplitKind::alfeld()).unwrap();
        assert!(a.is_exact());
        assert_eq!(a.orientation_fixes(), 0);
        assert_eq!(counts(&a).as_vector(), [5, 10, 10, 4]);
    }

    #[test]
    fn worsey_farin_single_tet() {
        let m = generate(&GeneratorSpec::single_tet()).unwrap();
        for kind in [
            SplitKind::worsey_farin(),
            SplitKind::worsey_farin().with_interior_point(InteriorPoint::Barycenter),
        ] {
            let w = split(&m, kind).unwrap();
            assert_eq!(w.is_exact(), kind.preserves_exactness());
            assert_eq!(w.orientation_fixes(), 0);
            let c = counts(&w);
            assert_eq!(c.as_vector(), [9, 26, 30, 12]);
            assert_eq!(c.chi(), 1);
        }
    }

    #[test]
    fn worsey_farin_two_tets() {
        let m = two_tets();
        let w = split(
            &m,
            SplitKind::worsey_farin().with_interior_point(InteriorPoint::Barycenter),
        )
        .unwrap();
        let c = counts(&w);
        assert_eq!((c.v, c.e, c.t), (14, 46, 24));
        assert_eq!(
            c,
            predict_split_counts(&counts(&m), SplitKind::worsey_farin())
        );
    }

    #[test]
    fn barycenter_crossing_failure_is_reported() {
        // A flat neighbour pushes the barycenter segment outside the shared face.
        let coords =
            Coords::from_integers(&[[0, 0, 0], [10, 0, 0], [0, 10, 0], [0, 0, 1], [40, -30, 1]]);
        let m = Mesh3::build(coords, vec![[0, 1, 2, 3], [1, 2, 3, 4]]).unwrap();
        let kind = SplitKind::worsey_farin().with_interior_point(InteriorPoint::Barycenter);
        assert!(matches!(split(&m, kind), Err(Error::Geometry(_))));
        assert!(split(&m, SplitKind::worsey_farin()).is_ok());
    }

    #[test]
    fn prediction_on_empty_counts_is_identity() {
        let c = MeshCounts::default();
        assert_eq!(predict_split_counts(&c, SplitKind::alfeld()), c);
        assert_eq!(predict_split_counts(&c, SplitKind::worsey_farin()), c);
    }

    #[test]
    fn splits_conserve_volume() {
        let m = two_tets();
        let before = total_volume6(&m).unwrap();
        let a = split(&m, SplitKind::alfeld()).unwrap();
        let w = split(
            &m,
            SplitKind::worsey_farin().with_interior_point(InteriorPoint::Barycenter),
        )
        .unwrap();
        assert_eq!(total_volume6(&a).unwrap(), before);
        assert_eq!(total_volume6(&w).unwrap(), before);
    }
}
