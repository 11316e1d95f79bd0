//! Uniform refinement: red refinement of tetrahedra, repeated splits, and
//! closed-form count prediction through the count transfer matrices.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::counts::{counts, MeshCounts};
use crate::error::{Error, Result};
use crate::geometry::{orient3, Point3, Scalar};
use crate::mesh::{Coords, Mesh3, TET_EDGES};
use crate::splits::{split, SplitKind};

/// Choice of the interior diagonal of the octahedron left after cutting off
/// the four corners of a tetrahedron.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DiagonalRule {
    /// Order the cell's vertices by coordinate sum (ties by index) and join
    /// the midpoints of edges `0–2` and `1–3`. On Freudenthal boxes this
    /// reproduces the Freudenthal triangulation of the halved grid.
    #[default]
    KuhnConsistent,
    /// Geometrically shortest diagonal, ties broken by midpoint indices.
    Shortest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RefineKind {
    RedUniform,
    RepeatedAlfeld,
    RepeatedWorseyFarin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RefineScheme {
    pub kind: RefineKind,
    pub diagonal_rule: DiagonalRule,
}

impl RefineScheme {
    pub fn red(diagonal_rule: DiagonalRule) -> Self {
        RefineScheme {
            kind: RefineKind::RedUniform,
            diagonal_rule,
        }
    }

    pub fn repeated_alfeld() -> Self {
        RefineScheme {
            kind: RefineKind::RepeatedAlfeld,
            diagonal_rule: DiagonalRule::default(),
        }
    }

    pub fn repeated_worsey_farin() -> Self {
        RefineScheme {
            kind: RefineKind::RepeatedWorseyFarin,
            diagonal_rule: DiagonalRule::default(),
        }
    }

    /// Cells produced per parent cell.
    pub fn growth(&self) -> usize {
        match self.kind {
            RefineKind::RedUniform => 8,
            RefineKind::RepeatedAlfeld => 4,
            RefineKind::RepeatedWorseyFarin => 12,
        }
    }
}

// Local labels: 0..4 are the cell's vertices, 4..10 the midpoints of
// TET_EDGES in order.
const fn mid(a: usize, b: usize) -> usize {
    let mut k = 0;
    while k < 6 {
        let [x, y] = TET_EDGES[k];
        if (x == a && y == b) || (x == b && y == a) {
            return 4 + k;
        }
        k += 1;
    }
    panic!("not an edge")
}

/// The three octahedron diagonals, each given with the cycle of the
/// remaining four octahedron vertices.
const DIAGONALS: [([usize; 2], [usize; 4]); 3] = [
    (
        [mid(0, 2), mid(1, 3)],
        [mid(0, 1), mid(0, 3), mid(2, 3), mid(1, 2)],
    ),
    (
        [mid(0, 1), mid(2, 3)],
        [mid(0, 2), mid(0, 3), mid(1, 3), mid(1, 2)],
    ),
    (
        [mid(0, 3), mid(1, 2)],
        [mid(0, 1), mid(0, 2), mid(2, 3), mid(1, 3)],
    ),
];

/// The eight children for diagonal `d`, positively oriented when the
/// parent's local order is positively oriented.
fn child_patterns(d: usize) -> [[usize; 4]; 8] {
    let corners = [
        [0, mid(0, 1), mid(0, 2), mid(0, 3)],
        [mid(0, 1), 1, mid(1, 2), mid(1, 3)],
        [mid(0, 2), mid(1, 2), 2, mid(2, 3)],
        [mid(0, 3), mid(1, 3), mid(2, 3), 3],
    ];
    let ([a, b], ring) = DIAGONALS[d];
    let mut out = [[0; 4]; 8];
    out[..4].copy_from_slice(&corners);
    for i in 0..4 {
        out[4 + i] = [a, b, ring[i], ring[(i + 1) % 4]];
    }
    // Orient against the doubled reference tetrahedron (integer midpoints).
    let mut pts = [[0i64; 3]; 10];
    for (k, p) in [[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2]]
        .iter()
        .enumerate()
    {
        pts[k] = *p;
    }
    for (k, [x, y]) in TET_EDGES.iter().enumerate() {
        pts[4 + k] = std::array::from_fn(|c| (pts[*x][c] + pts[*y][c]) / 2);
    }
    for child in &mut out {
        let p = child.map(|l| pts[l].map(|x| x as f64));
        if orient3(&p[0], &p[1], &p[2], &p[3]) < 0.0 {
            child.swap(2, 3);
        }
    }
    out
}

fn permutation_is_odd(perm: &[usize; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Red refinement: every edge is bisected, every cell is cut into eight.
pub fn refine_red(mesh: &Mesh3, rule: DiagonalRule) -> Mesh3 {
    let (coords, cells) = match mesh.coords() {
        Coords::Exact(p) => {
            let (pts, cells) = refine_red_with(mesh, p, rule);
            (Coords::Exact(pts), cells)
        }
        Coords::Float(p) => {
            let (pts, cells) = refine_red_with(mesh, p, rule);
            (Coords::Float(pts), cells)
        }
    };
    Mesh3::build(coords, cells).expect("red refinement of a valid mesh is valid")
}

fn refine_red_with<T: Scalar>(
    mesh: &Mesh3,
    p: &[Point3<T>],
    rule: DiagonalRule,
) -> (Vec<Point3<T>>, Vec<[usize; 4]>) {
    let t = mesh.tables();
    let n = p.len();
    let two = T::from_i64(2);
    let mut points = p.to_vec();
    points.extend(
        t.edges.iter().map(|&[a, b]| {
            std::array::from_fn(|k| (p[a][k].clone() + p[b][k].clone()) / two.clone())
        }),
    );
    let patterns: [[[usize; 4]; 8]; 3] = std::array::from_fn(child_patterns);

    let mut out = Vec::with_capacity(8 * mesh.n_cells());
    for cell in mesh.cells() {
        // `order[i]` is the position in `cell` of local vertex i.
        let mut order = [0, 1, 2, 3];
        if rule == DiagonalRule::KuhnConsistent {
            let key = |v: usize| p[v][0].clone() + p[v][1].clone() + p[v][2].clone();
            order.sort_by(|&i, &j| {
                key(cell[i])
                    .partial_cmp(&key(cell[j]))
                    .unwrap_or(Ordering::Equal)
                    .then(cell[i].cmp(&cell[j]))
            });
        }
        let local = order.map(|i| cell[i]);
        let global = |label: usize| -> usize {
            if label < 4 {
                local[label]
            } else {
                let [a, b] = TET_EDGES[label - 4];
                n + t.edge_index(local[a], local[b]).expect("cell edge exists")
            }
        };
        let d = match rule {
            DiagonalRule::KuhnConsistent => 0,
            DiagonalRule::Shortest => (0..3)
                .min_by(|&x, &y| {
                    let len = |d: usize| {
                        let [a, b] = DIAGONALS[d].0.map(global);
                        let v: [T; 3] =
                            std::array::from_fn(|k| points[a][k].clone() - points[b][k].clone());
                        v[0].clone() * v[0].clone()
                            + v[1].clone() * v[1].clone()
                            + v[2].clone() * v[2].clone()
                    };
                    let key = |d: usize| {
                        let mut g = DIAGONALS[d].0.map(global);
                        g.sort_unstable();
                        g
                    };
                    len(x)
                        .partial_cmp(&len(y))
                        .unwrap_or(Ordering::Equal)
                        .then(key(x).cmp(&key(y)))
                })
                .expect("three diagonals"),
        };
        let flip = permutation_is_odd(&order);
        for pattern in &patterns[d] {
            let mut child = pattern.map(global);
            if flip {
                child.swap(2, 3);
            }
            out.push(child);
        }
    }
    (points, out)
}

/// Count transfer matrix acting on `(V, E, F, T)`.
pub fn transfer_matrix(kind: RefineKind) -> [[i64; 4]; 4] {
    match kind {
        RefineKind::RedUniform => [[1, 1, 0, 0], [0, 2, 3, 1], [0, 0, 4, 8], [0, 0, 0, 8]],
        RefineKind::RepeatedAlfeld => [[1, 0, 0, 1], [0, 1, 0, 4], [0, 0, 1, 6], [0, 0, 0, 4]],
        RefineKind::RepeatedWorseyFarin => {
            [[1, 0, 1, 1], [0, 1, 3, 8], [0, 0, 3, 18], [0, 0, 0, 12]]
        }
    }
}

/// Transfer matrix acting on the boundary counts `(V_b, E_b, F_b)`.
pub fn boundary_transfer_matrix(kind: RefineKind) -> [[i64; 3]; 3] {
    match kind {
        RefineKind::RedUniform => [[1, 1, 0], [0, 2, 3], [0, 0, 4]],
        RefineKind::RepeatedAlfeld => [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        RefineKind::RepeatedWorseyFarin => [[1, 0, 1], [0, 1, 3], [0, 0, 3]],
    }
}

fn mat_mul<const N: usize>(a: &[[i128; N]; N], b: &[[i128; N]; N]) -> [[i128; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[k][j]).sum()))
}

/// `m^n` by repeated squaring in 128-bit integers.
pub fn mat_pow<const N: usize>(m: &[[i64; N]; N], mut n: u32) -> [[i128; N]; N] {
    let mut base: [[i128; N]; N] = m.map(|r| r.map(i128::from));
    let mut acc: [[i128; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| i128::from(i == j)));
    while n > 0 {
        if n & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        n >>= 1;
    }
    acc
}

fn apply<const N: usize>(m: &[[i128; N]; N], x: [i64; N]) -> [i64; N] {
    std::array::from_fn(|i| {
        let v: i128 = (0..N).map(|k| m[i][k] * i128::from(x[k])).sum();
        i64::try_from(v).expect("count exceeds 64 bits")
    })
}

/// Counts after `n` levels of `kind`, from the closed-form matrix power.
pub fn predict_counts(c: &MeshCounts, kind: RefineKind, n: u32) -> MeshCounts {
    let [v, e, f, t] = apply(&mat_pow(&transfer_matrix(kind), n), c.as_vector());
    let [vb, eb, fb] = apply(
        &mat_pow(&boundary_transfer_matrix(kind), n),
        [c.vb, c.eb, c.fb],
    );
    MeshCounts {
        v,
        e,
        f,
        t,
        vb,
        eb,
        fb,
    }
}

pub fn predict_red_counts(c: &MeshCounts, n: u32) -> MeshCounts {
    predict_counts(c, RefineKind::RedUniform, n)
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `A^n` for red refinement computed as `P D^n P⁻¹` from the eigenbasis
/// with eigenvalues `1, 2, 4, 8`.
pub fn red_power_by_eigenbasis(n: u32) -> [[BigRational; 4]; 4] {
    let p = [
        [q(1, 1), q(1, 1), q(1, 2), q(1, 6)],
        [q(0, 1), q(1, 1), q(3, 2), q(7, 6)],
        [q(0, 1), q(0, 1), q(1, 1), q(2, 1)],
        [q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
    ];
    let p_inv = [
        [q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)],
        [q(0, 1), q(1, 1), q(-3, 2), q(11, 6)],
        [q(0, 1), q(0, 1), q(1, 1), q(-2, 1)],
        [q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
    ];
    let d: [BigRational; 4] = [1u32, 2, 4, 8]
        .map(|l| BigRational::from_integer(num_traits::pow(BigInt::from(l), n as usize)));
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4).fold(BigRational::zero(), |acc, k| {
                acc + &p[i][k] * &d[k] * &p_inv[k][j]
            })
        })
    })
}

/// Limit of `2E/V` under repeated application of `kind`: the ratio of the
/// `E` and `V` entries of the eigenvector for the dominant eigenvalue.
pub fn ebar_limit(kind: RefineKind) -> Rational64 {
    let a = transfer_matrix(kind).map(|r| r.map(Rational64::from_integer));
    let lambda = a[3][3];
    let one = Rational64::one();
    let t = one;
    let f = a[2][3] * t / (lambda - a[2][2]);
    let e = (a[1][2] * f + a[1][3] * t) / (lambda - a[1][1]);
    let v = (a[0][1] * e + a[0][2] * f + a[0][3] * t) / (lambda - a[0][0]);
    Rational64::from_integer(2) * e / v
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountTrajectory {
    pub scheme: RefineScheme,
    /// Counts per level; level 0 is the input mesh.
    pub levels: Vec<MeshCounts>,
    /// Number of leading levels obtained from constructed meshes; the rest
    /// come from the transfer matrix.
    pub measured: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceOptions {
    pub cell_cap: usize,
    /// Continue with predicted counts once the next mesh would exceed the
    /// cap, instead of failing.
    pub continue_past_cap: bool,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        SequenceOptions {
            cell_cap: 100_000,
            continue_past_cap: true,
        }
    }
}

fn apply_scheme(mesh: &Mesh3, scheme: RefineScheme) -> Result<Mesh3> {
    match scheme.kind {
        RefineKind::RedUniform => Ok(refine_red(mesh, scheme.diagonal_rule)),
        RefineKind::RepeatedAlfeld => split(mesh, SplitKind::alfeld()),
        RefineKind::RepeatedWorseyFarin => split(mesh, SplitKind::worsey_farin()),
    }
}

/// Applies `scheme` `levels` times, returning the count trajectory and the
/// final mesh when it was constructed.
pub fn refine_sequence(
    mesh: &Mesh3,
    scheme: RefineScheme,
    levels: u32,
    options: SequenceOptions,
) -> Result<(CountTrajectory, Option<Mesh3>)> {
    let mut current = Some(mesh.clone());
    let mut out = vec![counts(mesh)];
    let mut measured = 1;
    for _ in 0..levels {
        let last = *out.last().expect("level 0 present");
        match current.take() {
            Some(m) if m.n_cells() * scheme.growth() <= options.cell_cap => {
                let next = apply_scheme(&m, scheme)?;
                out.push(counts(&next));
                measured += 1;
                current = Some(next);
            }
            Some(m) if !options.continue_past_cap => {
                return Err(Error::MemoryBudgetExceeded {
                    cap: options.cell_cap,
                    needed: m.n_cells() * scheme.growth(),
                });
            }
            _ => out.push(predict_counts(&last, scheme.kind, 1)),
        }
    }
    Ok((
        CountTrajectory {
            scheme,
            levels: out,
            measured,
        },
        current,
    ))
}
