//! Scalar abstraction and small geometric kernels shared by the 2D and 3D
//! meshes.
//!
//! Predicates are exact for [`BigRational`] coordinates. For `f64` a value is
//! treated as zero when its magnitude is below [`FLOAT_REL_TOL`] times the
//! natural scale of the quantity (for a triple product, the product of the
//! three vector lengths).

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Relative tolerance for floating point predicates.
pub const FLOAT_REL_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Signed
    + Send
    + Sync
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Sign of `self`, where `scale` is the magnitude the value should be
    /// compared against (ignored in exact arithmetic).
    fn sign_with_scale(&self, scale: f64) -> Ordering;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign_with_scale(&self, _scale: f64) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign_with_scale(&self, scale: f64) -> Ordering {
        if self.abs() <= FLOAT_REL_TOL * scale {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

pub type Point3<T> = [T; 3];
pub type Point2<T> = [T; 2];

pub fn sub3<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> Point3<T> {
    [
        a[0].clone() - b[0].clone(),
        a[1].clone() - b[1].clone(),
        a[2].clone() - b[2].clone(),
    ]
}

pub fn dot3<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn cross3<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> Point3<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn triple<T: Scalar>(a: &Point3<T>, b: &Point3<T>, c: &Point3<T>) -> T {
    dot3(a, &cross3(b, c))
}

fn norm3_f64<T: Scalar>(a: &Point3<T>) -> f64 {
    a.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Six times the signed volume of the tetrahedron `(a, b, c, d)`.
pub fn orient3<T: Scalar>(a: &Point3<T>, b: &Point3<T>, c: &Point3<T>, d: &Point3<T>) -> T {
    triple(&sub3(b, a), &sub3(c, a), &sub3(d, a))
}

/// Sign of [`orient3`] with the normalized-triple-product tolerance.
pub fn orient3_sign<T: Scalar>(
    a: &Point3<T>,
    b: &Point3<T>,
    c: &Point3<T>,
    d: &Point3<T>,
) -> Ordering {
    let (u, v, w) = (sub3(b, a), sub3(c, a), sub3(d, a));
    let scale = if T::EXACT {
        0.0
    } else {
        norm3_f64(&u) * norm3_f64(&v) * norm3_f64(&w)
    };
    triple(&u, &v, &w).sign_with_scale(scale)
}

/// Twice the signed area of the triangle `(a, b, c)`.
pub fn orient2<T: Scalar>(a: &Point2<T>, b: &Point2<T>, c: &Point2<T>) -> T {
    let (ux, uy) = (b[0].clone() - a[0].clone(), b[1].clone() - a[1].clone());
    let (vx, vy) = (c[0].clone() - a[0].clone(), c[1].clone() - a[1].clone());
    ux * vy - uy * vx
}

pub fn orient2_sign<T: Scalar>(a: &Point2<T>, b: &Point2<T>, c: &Point2<T>) -> Ordering {
    let scale = if T::EXACT {
        0.0
    } else {
        let l = |p: &Point2<T>, q: &Point2<T>| {
            ((p[0].to_f64() - q[0].to_f64()).powi(2) + (p[1].to_f64() - q[1].to_f64()).powi(2))
                .sqrt()
        };
        l(a, b) * l(a, c)
    };
    orient2(a, b, c).sign_with_scale(scale)
}

/// Weighted combination `sum w_i p_i / sum w_i`.
pub fn affine_combination<T: Scalar, const D: usize>(points: &[&[T; D]], weights: &[T]) -> [T; D] {
    let total = weights.iter().cloned().fold(T::zero(), |acc, w| acc + w);
    std::array::from_fn(|k| {
        let s = points
            .iter()
            .zip(weights)
            .fold(T::zero(), |acc, (p, w)| acc + p[k].clone() * w.clone());
        s / total.clone()
    })
}

pub fn centroid<T: Scalar, const D: usize>(points: &[&[T; D]]) -> [T; D] {
    let w = vec![T::one(); points.len()];
    affine_combination(points, &w)
}

pub fn to_f64_point<T: Scalar, const D: usize>(p: &[T; D]) -> [f64; D] {
    std::array::from_fn(|k| p[k].to_f64())
}

/// Solid angle subtended at `apex` by the triangle `(a, b, c)`, in
/// steradians, using the Van Oosterom–Strackee formula.
pub fn solid_angle(apex: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let r = |p: [f64; 3]| [p[0] - apex[0], p[1] - apex[1], p[2] - apex[2]];
    let (ra, rb, rc) = (r(a), r(b), r(c));
    let n = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let d = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let (la, lb, lc) = (n(ra), n(rb), n(rc));
    let num = triple(&ra, &rb, &rc).abs();
    let den = la * lb * lc + d(ra, rb) * lc + d(ra, rc) * lb + d(rb, rc) * la;
    2.0 * num.atan2(den)
}

/// Converts an `f64` into the exact rational it represents.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
