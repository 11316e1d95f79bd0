//! Dimensions of Lagrange and discontinuous spaces, of divergence-free
//! element pairs on original and split meshes, and their asymptotic forms
//! in terms of the mean edge valence `ē`.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::counts::MeshCounts;
use crate::error::{Error, Result};
use crate::splits::{predict_split_counts, SplitKind};

/// Nodes of continuous piecewise polynomials of degree `k`.
pub fn dim_lagrange(c: &MeshCounts, k: u32) -> Result<i64> {
    if k == 0 {
        return Err(Error::InvalidDegree(k));
    }
    let [v, e, f, t] = lagrange_coefficients(k);
    Ok(v * c.v + e * c.e + f * c.f + t * c.t)
}

/// Node multiplicities per vertex, edge, face and cell for degree `k ≥ 1`.
fn lagrange_coefficients(k: u32) -> [i64; 4] {
    let k = i64::from(k);
    [
        1,
        k - 1,
        (k - 1) * (k - 2) / 2,
        (k - 1) * (k - 2) * (k - 3) / 6,
    ]
}

/// `C(degree + 3, 3)`, the dimension of polynomials of the given degree on
/// one tetrahedron.
pub fn dg_local(degree: u32) -> i64 {
    let d = i64::from(degree);
    (d + 1) * (d + 2) * (d + 3) / 6
}

/// Discontinuous piecewise polynomials of the given degree.
pub fn dim_dg(c: &MeshCounts, degree: u32) -> i64 {
    c.t * dg_local(degree)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FePair {
    /// Scott–Vogelius on the original mesh, velocity degree `k`.
    Sv(u32),
    /// Scott–Vogelius on the Alfeld split, `k ≥ 3`.
    Alfeld(u32),
    /// Scott–Vogelius on the Worsey–Farin split, `k ∈ {1, 2}`.
    Wf(u32),
}

impl FePair {
    pub fn degree(&self) -> u32 {
        match *self {
            FePair::Sv(k) | FePair::Alfeld(k) | FePair::Wf(k) => k,
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            FePair::Sv(k) => k >= 1,
            FePair::Alfeld(k) => k >= 3,
            FePair::Wf(k) => k == 1 || k == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedPair(self.to_string()))
        }
    }

    /// The pair's split applied to the original counts.
    pub fn mesh_counts(&self, original: &MeshCounts) -> MeshCounts {
        match self {
            FePair::Sv(_) => *original,
            FePair::Alfeld(_) => predict_split_counts(original, SplitKind::alfeld()),
            FePair::Wf(_) => predict_split_counts(original, SplitKind::worsey_farin()),
        }
    }
}

impl fmt::Display for FePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FePair::Sv(k) => write!(f, "sv{k}"),
            FePair::Alfeld(k) => write!(f, "alfeld{k}"),
            FePair::Wf(k) => write!(f, "wf{k}"),
        }
    }
}

impl std::str::FromStr for FePair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (name, digits) = s.split_at(split);
        let k: u32 = digits
            .parse()
            .map_err(|_| Error::UnsupportedPair(s.to_string()))?;
        let pair = match name {
            "sv" => FePair::Sv(k),
            "alfeld" => FePair::Alfeld(k),
            "wf" => FePair::Wf(k),
            _ => return Err(Error::UnsupportedPair(s.to_string())),
        };
        pair.check()?;
        Ok(pair)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FePairSpec {
    pub pair: FePair,
    /// Counts of the original (unsplit) mesh.
    pub counts: MeshCounts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PressureExactness {
    Exact,
    UpperBound,
    /// The full discontinuous space stands in for an uncharacterized
    /// divergence space.
    FullDgProxy,
}

/// The affine form `(a·ē + b)·V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    pub a: Rational64,
    pub b: Rational64,
}

impl AffineForm {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        AffineForm { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        AffineForm::new(a.into(), b.into())
    }

    /// Asymptotic form of `c_V·V + c_E·E + c_F·F + c_T·T` on a large mesh,
    /// using `E = ē/2·V`, `F ≈ (ē − 2)V` and `T ≈ (ē/2 − 1)V`.
    pub fn from_count_coefficients(c: [Rational64; 4]) -> Self {
        let half = Rational64::new(1, 2);
        let two = Rational64::from_integer(2);
        AffineForm {
            a: c[1] * half + c[2] + c[3] * half,
            b: c[0] - two * c[2] - c[3],
        }
    }

    /// Coefficient of `V` at the given `ē`.
    pub fn eval(&self, ebar: Rational64) -> Rational64 {
        self.a * ebar + self.b
    }

    /// Root in `ē`, if the form is not constant.
    pub fn root(&self) -> Option<Rational64> {
        (!self.a.is_zero()).then(|| -self.b / self.a)
    }
}

impl std::ops::Add for AffineForm {
    type Output = AffineForm;

    fn add(self, o: AffineForm) -> AffineForm {
        AffineForm::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for AffineForm {
    type Output = AffineForm;

    fn sub(self, o: AffineForm) -> AffineForm {
        AffineForm::new(self.a - o.a, self.b - o.b)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = |x: Rational64| {
            if x.is_integer() {
                x.to_integer().to_string()
            } else {
                format!("{}", *x.numer() as f64 / *x.denom() as f64)
            }
        };
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "({}ē {} {})V", num(self.a), sign, num(self.b.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub pair: FePair,
    pub dim_velocity: i64,
    pub dim_pressure_upper: i64,
    pub pressure_exactness: PressureExactness,
    pub dim_total: i64,
    /// Dimension of the full discontinuous pressure space on the pair's mesh.
    pub dim_dg: i64,
    /// `dim_dg − dim_pressure_upper` for the Worsey–Farin `k = 1` pair.
    pub missing_modes: Option<i64>,
    pub asymptotic_velocity: AffineForm,
    pub asymptotic_pressure: AffineForm,
}

fn velocity_count_coefficients(pair: FePair) -> [i64; 4] {
    let lag = lagrange_coefficients(pair.degree());
    // Split counts as linear maps of the original counts (rows V, E, F, T).
    let s: [[i64; 4]; 4] = match pair {
        FePair::Sv(_) => [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        FePair::Alfeld(_) => [[1, 0, 0, 1], [0, 1, 0, 4], [0, 0, 1, 6], [0, 0, 0, 4]],
        FePair::Wf(_) => [[1, 0, 1, 1], [0, 1, 3, 8], [0, 0, 3, 18], [0, 0, 0, 12]],
    };
    std::array::from_fn(|j| 3 * (0..4).map(|i| lag[i] * s[i][j]).sum::<i64>())
}

/// Leading (boundary-free) pressure dimension as coefficients of the
/// original `(V, E, F, T)`.
fn pressure_count_coefficients(pair: FePair) -> [i64; 4] {
    let k = pair.degree();
    match pair {
        FePair::Sv(_) => [0, 0, 0, dg_local(k - 1)],
        FePair::Alfeld(_) => [0, 0, 0, 4 * dg_local(k - 1)],
        FePair::Wf(1) => [0, 0, 4, 0],
        FePair::Wf(_) => [0, 0, 5, 28],
    }
}

fn form(c: [i64; 4]) -> AffineForm {
    AffineForm::from_count_coefficients(c.map(Rational64::from_integer))
}

pub fn dims(spec: &FePairSpec) -> Result<DimReport> {
    let pair = spec.pair;
    pair.check()?;
    let k = pair.degree();
    let c = &spec.counts;
    let m = pair.mesh_counts(c);
    let dim_velocity = 3 * dim_lagrange(&m, k)?;
    let dg = dim_dg(&m, k - 1);
    let (pressure, exactness, missing) = match pair {
        FePair::Sv(_) => (dg, PressureExactness::FullDgProxy, None),
        FePair::Alfeld(_) => (dg, PressureExactness::Exact, None),
        FePair::Wf(1) => {
            let bound = 4 * (c.f - c.fb) + c.fb;
            (bound, PressureExactness::UpperBound, Some(dg - bound))
        }
        FePair::Wf(_) => (28 * c.t + 5 * c.f - 1, PressureExactness::Exact, None),
    };
    let (velocity_form, pressure_form) = asymptotic_dims(pair)?;
    Ok(DimReport {
        pair,
        dim_velocity,
        dim_pressure_upper: pressure,
        pressure_exactness: exactness,
        dim_total: dim_velocity + pressure,
        dim_dg: dg,
        missing_modes: missing,
        asymptotic_velocity: velocity_form,
        asymptotic_pressure: pressure_form,
    })
}

/// Velocity and pressure dimensions per vertex as affine forms in `ē`.
pub fn asymptotic_dims(pair: FePair) -> Result<(AffineForm, AffineForm)> {
    pair.check()?;
    Ok((
        form(velocity_count_coefficients(pair)),
        form(pressure_count_coefficients(pair)),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesGapReport {
    /// Lower bound `3(V+E+4F+9T) − (28T+5F)` on the divergence-free
    /// quadratics of the Worsey–Farin split.
    pub dim_z2_lower: i64,
    /// `3(4V+2E)`, the dimension of vector C¹ cubics on the split.
    pub dim_curl_s3_upper: i64,
    pub gap: i64,
    pub asymptotic_gap: AffineForm,
    pub positive: bool,
}

pub fn stokes_gap(c: &MeshCounts) -> StokesGapReport {
    let dim_z2_lower = 3 * (c.v + c.e + 4 * c.f + 9 * c.t) - (28 * c.t + 5 * c.f);
    let dim_curl_s3_upper = 3 * (4 * c.v + 2 * c.e);
    let gap = dim_z2_lower - dim_curl_s3_upper;
    StokesGapReport {
        dim_z2_lower,
        dim_curl_s3_upper,
        gap,
        asymptotic_gap: form([-9, -3, 7, -1]),
        positive: gap > 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceDim {
    pub name: &'static str,
    pub total: AffineForm,
}

/// Total dimensions per vertex of alternative (not divergence-free)
/// elements, for comparison output.
pub fn reference_dims_alternatives() -> Vec<ReferenceDim> {
    let fixed = |name, n| ReferenceDim {
        name,
        total: AffineForm::from_ints(0, n),
    };
    vec![
        fixed("bernardi-raugel", 21),
        fixed("mini", 22),
        fixed("taylor-hood", 25),
        fixed("reduced-taylor-hood", 11),
        ReferenceDim {
            name: "zienkiewicz-reduced",
            total: form([3, 0, 1, 1]),
        },
    ]
}
