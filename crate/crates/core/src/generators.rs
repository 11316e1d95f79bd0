//! Deterministic reference meshes with exact rational coordinates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{orient3_sign, Point3};
use crate::mesh::{Coords, Mesh3};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// The reference tetrahedron `0, extent·e_x, extent·e_y, extent·e_z`.
    SingleTet { extent: BigRational },
    /// The cube `[0, extent]³` cut into `n × m × l` boxes, each split into
    /// six Kuhn tetrahedra around its `(0,0,0)–(1,1,1)` diagonal.
    FreudenthalBox {
        n: usize,
        m: usize,
        l: usize,
        extent: BigRational,
    },
    /// One interior vertex joined to `vb` boundary vertices.
    Star { vb: usize },
    /// Convex hull of the spine `(0,0,±half_height)` and `k` points on the
    /// circle of the given radius in the `z = 0` plane, cut into `2k` cells
    /// around the origin.
    Diamond {
        k: usize,
        radius: BigRational,
        half_height: BigRational,
    },
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl GeneratorSpec {
    pub fn single_tet() -> Self {
        GeneratorSpec::SingleTet { extent: int(1) }
    }

    /// Freudenthal box on `[0, 20]³`.
    pub fn freudenthal(n: usize, m: usize, l: usize) -> Self {
        GeneratorSpec::FreudenthalBox {
            n,
            m,
            l,
            extent: int(20),
        }
    }

    pub fn star(vb: usize) -> Self {
        GeneratorSpec::Star { vb }
    }

    /// Diamond with radius 20 and spine `±20`.
    pub fn diamond(k: usize) -> Self {
        GeneratorSpec::Diamond {
            k,
            radius: int(20),
            half_height: int(20),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Mesh3> {
    match spec {
        GeneratorSpec::SingleTet { extent } => {
            positive(extent, "extent")?;
            let z = BigRational::zero();
            let e = extent.clone();
            build(
                vec![
                    [z.clone(), z.clone(), z.clone()],
                    [e.clone(), z.clone(), z.clone()],
                    [z.clone(), e.clone(), z.clone()],
                    [z.clone(), z.clone(), e],
                ],
                vec![[0, 1, 2, 3]],
            )
        }
        GeneratorSpec::FreudenthalBox { n, m, l, extent } => {
            positive(extent, "extent")?;
            if *n == 0 || *m == 0 || *l == 0 {
                return Err(Error::InvalidSpec(format!(
                    "freudenthal box dimensions must be positive, got {n}x{m}x{l}"
                )));
            }
            freudenthal_box([*n, *m, *l], extent)
        }
        GeneratorSpec::Star { vb } => match *vb {
            4 => star4(&int(20)),
            vb if vb > 4 => generate(&GeneratorSpec::diamond(vb - 2)),
            vb => Err(Error::InvalidSpec(format!(
                "star meshes need at least 4 boundary vertices, got {vb}"
            ))),
        },
        GeneratorSpec::Diamond {
            k,
            radius,
            half_height,
        } => {
            if *k < 3 {
                return Err(Error::InvalidSpec(format!("diamond needs k >= 3, got {k}")));
            }
            positive(radius, "radius")?;
            positive(half_height, "half height")?;
            diamond(*k, radius, half_height)
        }
    }
}

fn positive(x: &BigRational, what: &str) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "{what} must be positive, got {x}"
        )))
    }
}

/// Builds a mesh after putting every cell in positive orientation, so the
/// result carries no orientation fixes.
fn build(points: Vec<Point3<BigRational>>, mut cells: Vec<[usize; 4]>) -> Result<Mesh3> {
    for c in &mut cells {
        if orient3_sign(&points[c[0]], &points[c[1]], &points[c[2]], &points[c[3]])
            == Ordering::Less
        {
            c.swap(2, 3);
        }
    }
    Mesh3::build(Coords::Exact(points), cells)
}

const KUHN_PATHS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn freudenthal_box(dims: [usize; 3], extent: &BigRational) -> Result<Mesh3> {
    let [n, m, l] = dims;
    let index = |i: usize, j: usize, k: usize| i + (n + 1) * (j + (m + 1) * k);
    let mut points = Vec::with_capacity((n + 1) * (m + 1) * (l + 1));
    for k in 0..=l {
        for j in 0..=m {
            for i in 0..=n {
                points.push([
                    extent * BigRational::new(BigInt::from(i), BigInt::from(n)),
                    extent * BigRational::new(BigInt::from(j), BigInt::from(m)),
                    extent * BigRational::new(BigInt::from(k), BigInt::from(l)),
                ]);
            }
        }
    }
    let mut cells = Vec::with_capacity(6 * n * m * l);
    for k in 0..l {
        for j in 0..m {
            for i in 0..n {
                for path in KUHN_PATHS {
                    let mut at = [i, j, k];
                    let mut cell = [index(i, j, k), 0, 0, 0];
                    for (step, &axis) in path.iter().enumerate() {
                        at[axis] += 1;
                        cell[step + 1] = index(at[0], at[1], at[2]);
                    }
                    cells.push(cell);
                }
            }
        }
    }
    build(points, cells)
}

/// The regular tetrahedron on alternate corners of the cube `[-s, s]³`.
pub fn regular_tet_points(s: &BigRational) -> Vec<Point3<BigRational>> {
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
        .iter()
        .map(|p| p.map(|x| s * int(x)))
        .collect()
}

pub fn regular_tet() -> Mesh3 {
    build(regular_tet_points(&int(1)), vec![[0, 1, 2, 3]]).expect("regular tetrahedron is valid")
}

/// Two tetrahedra glued along the face `e_x, e_y, e_z`.
pub fn two_tets() -> Mesh3 {
    let points = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
        .iter()
        .map(|p| p.map(int))
        .collect();
    build(points, vec![[0, 1, 2, 3], [4, 1, 2, 3]]).expect("two-tet mesh is valid")
}

fn star4(s: &BigRational) -> Result<Mesh3> {
    let mut points = regular_tet_points(s);
    points.push([
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ]);
    build(
        points,
        vec![[4, 1, 2, 3], [0, 4, 2, 3], [0, 1, 4, 3], [0, 1, 2, 4]],
    )
}

/// A point exactly on the circle of radius `r`, at angle close to `theta`,
/// from the rational parametrization `((1-t²)/(1+t²), 2t/(1+t²))`.
fn circle_point(theta: f64, r: &BigRational) -> [BigRational; 2] {
    const DEN: i64 = 1000;
    let half = theta / 2.0;
    if (half - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
        return [-r.clone(), BigRational::zero()];
    }
    let t = BigRational::new(
        BigInt::from((half.tan() * DEN as f64).round() as i64),
        BigInt::from(DEN),
    );
    let one = int(1);
    let d = &one + &t * &t;
    [r * (&one - &t * &t) / &d, r * (int(2) * &t) / &d]
}

fn diamond(k: usize, radius: &BigRational, half_height: &BigRational) -> Result<Mesh3> {
    let z = BigRational::zero();
    let mut points = vec![
        [z.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), -half_height.clone()],
        [z.clone(), z.clone(), half_height.clone()],
    ];
    for i in 0..k {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
        let [x, y] = circle_point(theta, radius);
        points.push([x, y, z.clone()]);
    }
    let mut cells = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (a, b) = (3 + i, 3 + (i + 1) % k);
        cells.push([0, a, b, 2]);
        cells.push([0, b, a, 1]);
    }
    build(points, cells)
}

/// Mean edge valence `(8V_b - 12)/(V_b + 1)` of a mesh with a single
/// interior vertex and `V_b` boundary vertices.
pub fn star_ebar(vb: usize) -> Result<Rational64> {
    if vb < 4 {
        return Err(Error::InvalidSpec(format!(
            "star meshes need at least 4 boundary vertices, got {vb}"
        )));
    }
    let vb = vb as i64;
    Ok(Rational64::new(8 * vb - 12, vb + 1))
}
