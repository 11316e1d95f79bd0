//! Exact rank of the divergence operator from continuous vector Lagrange
//! elements of degree `k` into discontinuous polynomials of degree `k − 1`.
//!
//! Rows are the homogeneous barycentric monomials `λ^β`, `|β| = k − 1`, of
//! each cell. Columns are the nodal basis functions of the global Lagrange
//! nodes, three components each. Entries `∫_τ λ^β ∇·φ` are exact rationals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cross3, sub3, Point3};
use crate::mesh::{Coords, Mesh3};

/// Boundary condition on the velocity space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityBoundary {
    /// All Lagrange nodes are unknowns.
    #[default]
    Free,
    /// Nodes on boundary faces are fixed to zero.
    Dirichlet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub cell_cap: usize,
    pub degree_cap: u32,
    pub boundary: VelocityBoundary,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cell_cap: 64,
            degree_cap: 3,
            boundary: VelocityBoundary::Free,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivAssembly {
    pub degree: u32,
    /// Dense row-major matrix, `rows.len() × cols.len()`.
    pub matrix: Vec<Vec<BigRational>>,
    /// `(cell, β)` per row.
    pub rows: Vec<(usize, [u32; 4])>,
    /// `(node, component)` per column.
    pub cols: Vec<(usize, usize)>,
    pub nodes: Vec<Point3<BigRational>>,
    pub boundary: VelocityBoundary,
    pub n_vertices: usize,
    pub n_cells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivRankResult {
    /// `dim ∇·V_k`.
    pub rank: usize,
    /// `dim (∇·V_k ∩ L²_0)`: one less than `rank` when some divergence has
    /// nonzero mean, which happens exactly for free velocities.
    pub rank_mean_zero: usize,
    pub dim_velocity: usize,
    pub dim_dg: usize,
    pub degree: u32,
    pub boundary: VelocityBoundary,
    pub n_vertices: usize,
    pub n_cells: usize,
}

impl DivRankResult {
    /// Pressure modes not reached by the divergence.
    pub fn missing_modes(&self) -> usize {
        self.dim_dg - self.rank
    }
}

/// Multi-indices with four entries summing to `total`, lexicographic.
pub fn multi_indices(total: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=total).rev() {
        for b in (0..=total - a).rev() {
            for c in (0..=total - a - b).rev() {
                out.push([a, b, c, total - a - b - c]);
            }
        }
    }
    out
}

type Poly = BTreeMap<[u32; 4], BigRational>;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Nodal basis function of node `alpha` for degree `k`, as a polynomial in
/// the barycentric coordinates.
fn lagrange_basis(alpha: [u32; 4], k: u32) -> Poly {
    let mut p = Poly::new();
    p.insert([0; 4], BigRational::one());
    for (i, &a) in alpha.iter().enumerate() {
        for j in 0..a {
            let mut next = Poly::new();
            for (e, c) in &p {
                let mut up = *e;
                up[i] += 1;
                *next.entry(up).or_insert_with(BigRational::zero) += c * int(i64::from(k));
                *next.entry(*e).or_insert_with(BigRational::zero) -= c * int(i64::from(j));
            }
            let d = int(i64::from(j) + 1);
            p = next
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e, c / &d))
                .collect();
        }
    }
    p
}

fn derivative(p: &Poly, i: usize) -> Poly {
    p.iter()
        .filter(|(e, _)| e[i] > 0)
        .map(|(e, c)| {
            let mut d = *e;
            d[i] -= 1;
            (d, c * int(i64::from(e[i])))
        })
        .collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, x| acc * BigInt::from(x))
}

/// `∫_τ λ^γ / (6|τ|) = γ! / (3 + |γ|)!`.
fn monomial_integral(g: [u32; 4]) -> BigRational {
    let num = g.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x));
    BigRational::new(num, factorial(3 + g.iter().sum::<u32>()))
}

/// `table[row][node][i] = ∫ λ^β ∂φ_α/∂λ_i / (6|τ|)` on any cell.
fn reference_table(k: u32) -> Vec<Vec<[BigRational; 4]>> {
    let betas = multi_indices(k - 1);
    let derivs: Vec<[Poly; 4]> = multi_indices(k)
        .into_iter()
        .map(|a| {
            let phi = lagrange_basis(a, k);
            std::array::from_fn(|i| derivative(&phi, i))
        })
        .collect();
    betas
        .iter()
        .map(|b| {
            derivs
                .iter()
                .map(|d| {
                    std::array::from_fn(|i| {
                        d[i].iter().fold(BigRational::zero(), |acc, (e, c)| {
                            let g = std::array::from_fn(|m| e[m] + b[m]);
                            acc + c * monomial_integral(g)
                        })
                    })
                })
                .collect()
        })
        .collect()
}

pub fn assemble_div(mesh: &Mesh3, k: u32, config: &OracleConfig) -> Result<DivAssembly> {
    if k == 0 {
        return Err(Error::InvalidDegree(k));
    }
    if k > config.degree_cap {
        return Err(Error::DegreeCapExceeded {
            degree: k,
            cap: config.degree_cap,
        });
    }
    if mesh.n_cells() > config.cell_cap {
        return Err(Error::CellCapExceeded {
            cells: mesh.n_cells(),
            cap: config.cell_cap,
        });
    }
    let Coords::Exact(p) = mesh.coords() else {
        return Err(Error::NonRationalMesh);
    };

    let alphas = multi_indices(k);
    let betas = multi_indices(k - 1);
    let kq = int(i64::from(k));
    let mut node_ids: HashMap<Point3<BigRational>, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut cell_nodes = Vec::with_capacity(mesh.n_cells());
    let mut on_boundary = Vec::new();
    let tables = mesh.tables();
    for (ci, c) in mesh.cells().iter().enumerate() {
        let ids: Vec<usize> = alphas
            .iter()
            .map(|a| {
                let x: Point3<BigRational> = std::array::from_fn(|m| {
                    (0..4).fold(BigRational::zero(), |acc, i| {
                        acc + &p[c[i]][m] * int(i64::from(a[i]))
                    }) / &kq
                });
                let id = *node_ids.entry(x.clone()).or_insert_with(|| {
                    nodes.push(x);
                    on_boundary.push(false);
                    nodes.len() - 1
                });
                // A node is on face i exactly when its weight on vertex i is zero.
                on_boundary[id] |=
                    (0..4).any(|i| a[i] == 0 && tables.face_boundary[tables.cell_faces[ci][i]]);
                id
            })
            .collect();
        cell_nodes.push(ids);
    }
    // Column index per (node, component), None for fixed nodes.
    let mut cols = Vec::new();
    let mut col_of = vec![None; nodes.len()];
    for (node, slot) in col_of.iter_mut().enumerate() {
        if config.boundary == VelocityBoundary::Free || !on_boundary[node] {
            *slot = Some(cols.len());
            cols.extend((0..3).map(|m| (node, m)));
        }
    }

    let table = reference_table(k);
    let n_cols = cols.len();
    let mut matrix = Vec::with_capacity(mesh.n_cells() * betas.len());
    let mut rows = Vec::with_capacity(matrix.capacity());
    for (ci, c) in mesh.cells().iter().enumerate() {
        // 6|τ|·∇λ_i, so that the volume factor cancels.
        let d = [1, 2, 3].map(|j| sub3(&p[c[j]], &p[c[0]]));
        let mut g = [
            [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
            cross3(&d[1], &d[2]),
            cross3(&d[2], &d[0]),
            cross3(&d[0], &d[1]),
        ];
        g[0] = std::array::from_fn(|m| -(&g[1][m] + &g[2][m] + &g[3][m]));
        for (bi, b) in betas.iter().enumerate() {
            let mut row = vec![BigRational::zero(); n_cols];
            for (ai, &node) in cell_nodes[ci].iter().enumerate() {
                let Some(base) = col_of[node] else { continue };
                for (m, entry) in row[base..base + 3].iter_mut().enumerate() {
                    *entry += (0..4).fold(BigRational::zero(), |acc, i| {
                        acc + &table[bi][ai][i] * &g[i][m]
                    });
                }
            }
            matrix.push(row);
            rows.push((ci, *b));
        }
    }
    Ok(DivAssembly {
        degree: k,
        matrix,
        rows,
        cols,
        nodes,
        boundary: config.boundary,
        n_vertices: mesh.n_vertices(),
        n_cells: mesh.n_cells(),
    })
}

/// Rows scaled to integers.
fn integer_rows(m: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination. The pivot in each column is
/// the entry of largest magnitude, ties going to the lowest row.
pub fn bareiss_rank(m: &[Vec<BigRational>]) -> usize {
    let mut a = integer_rows(m);
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..n_cols {
        if r == n_rows {
            break;
        }
        let mut pivot: Option<usize> = None;
        for i in r..n_rows {
            if !a[i][col].is_zero() && pivot.is_none_or(|p| a[i][col].abs() > a[p][col].abs()) {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pr = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..n_cols {
                let v = (&pr[col] * &row[j] - &lead * &pr[j]) / &prev;
                row[j] = v;
            }
        }
        prev = a[r][col].clone();
        r += 1;
    }
    r
}

/// Rank by reducing the columns to echelon form over the rationals, with
/// first-nonzero pivoting.
pub fn column_echelon_rank(m: &[Vec<BigRational>]) -> usize {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut cols: Vec<Vec<BigRational>> = (0..n_cols)
        .map(|j| (0..n_rows).map(|i| m[i][j].clone()).collect())
        .collect();
    let mut rank = 0;
    for row in 0..n_rows {
        let Some(p) = (rank..n_cols).find(|&j| !cols[j][row].is_zero()) else {
            continue;
        };
        cols.swap(rank, p);
        let pivot = cols[rank].clone();
        let inv = pivot[row].recip();
        for col in cols.iter_mut().skip(rank + 1) {
            if col[row].is_zero() {
                continue;
            }
            let f = &col[row] * &inv;
            for i in row..n_rows {
                if !pivot[i].is_zero() {
                    col[i] -= &f * &pivot[i];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Multinomial coefficient `(Σβ)! / β!`, the weight of `λ^β` in
/// `1 = (λ_0 + λ_1 + λ_2 + λ_3)^{|β|}`.
fn multinomial(b: [u32; 4]) -> BigInt {
    factorial(b.iter().sum()) / b.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x))
}

/// True when some column has a divergence with nonzero integral.
fn reaches_nonzero_mean(a: &DivAssembly) -> bool {
    let n_cols = a.cols.len();
    (0..n_cols).any(|j| {
        let mean = a
            .rows
            .iter()
            .zip(&a.matrix)
            .fold(BigRational::zero(), |acc, ((_, b), row)| {
                acc + BigRational::from_integer(multinomial(*b)) * &row[j]
            });
        !mean.is_zero()
    })
}

pub fn div_rank(a: &DivAssembly) -> DivRankResult {
    let rank = bareiss_rank(&a.matrix);
    DivRankResult {
        rank,
        rank_mean_zero: rank - usize::from(reaches_nonzero_mean(a)),
        dim_velocity: a.cols.len(),
        dim_dg: a.rows.len(),
        degree: a.degree,
        boundary: a.boundary,
        n_vertices: a.n_vertices,
        n_cells: a.n_cells,
    }
}
