//! Plain-text mesh files.
//!
//! ```text
//! tmesh 3
//! vertices 4
//! 0 0 0
//! 1 0 0
//! 0 1 0
//! 0 0 1/2
//! cells 1
//! 0 1 2 3
//! ```
//!
//! Integer and `p/q` coordinates are exact. A single decimal token switches
//! the whole mesh to floating point. Lines starting with `#` are comments.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use tetra_census::{Coords, Mesh2, Mesh3};

use crate::error::CliError;

#[derive(Debug)]
pub enum AnyMesh {
    Tet(Mesh3),
    Tri(Mesh2),
}

impl AnyMesh {
    pub fn dim(&self) -> usize {
        match self {
            AnyMesh::Tet(_) => 3,
            AnyMesh::Tri(_) => 2,
        }
    }
}

enum Token {
    Exact(BigRational),
    Float(f64),
}

fn parse_coordinate(s: &str, line: usize) -> Result<Token, CliError> {
    let bad = || CliError::format(line, format!("invalid coordinate `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Token::Exact(BigRational::new(p, q)));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Ok(Token::Exact(BigRational::from_integer(i)));
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Token::Float(x)),
        _ => Err(bad()),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank, non-comment line with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), CliError> {
        self.next()
            .ok_or_else(|| CliError::Format(format!("unexpected end of file, expected {what}")))
    }

    fn header(&mut self, key: &str) -> Result<(usize, usize), CliError> {
        let (n, line) = self.expect(&format!("`{key} <n>`"))?;
        let mut it = line.split_whitespace();
        match (it.next(), it.next().map(str::parse::<usize>), it.next()) {
            (Some(k), Some(Ok(v)), None) if k == key => Ok((n, v)),
            _ => Err(CliError::format(
                n,
                format!("expected `{key} <n>`, found `{line}`"),
            )),
        }
    }
}

pub fn read(text: &str) -> Result<AnyMesh, CliError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (_, dim) = lines.header("tmesh")?;
    if dim != 2 && dim != 3 {
        return Err(CliError::Format(format!("unsupported dimension {dim}")));
    }
    let (_, nv) = lines.header("vertices")?;
    let mut tokens = Vec::with_capacity(nv * dim);
    for _ in 0..nv {
        let (n, line) = lines.expect("a vertex line")?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != dim {
            return Err(CliError::format(n, format!("expected {dim} coordinates")));
        }
        for f in fields {
            tokens.push(parse_coordinate(f, n)?);
        }
    }
    let (_, nc) = lines.header("cells")?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, line) = lines.expect("a cell line")?;
        let ids: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
        match ids {
            Ok(ids) if ids.len() == dim + 1 => {
                if let Some(v) = ids.iter().find(|&&v| v >= nv) {
                    return Err(CliError::format(
                        n,
                        format!("vertex index {v} out of range"),
                    ));
                }
                cells.push(ids)
            }
            _ => {
                return Err(CliError::format(
                    n,
                    format!("expected {} vertex indices", dim + 1),
                ))
            }
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(CliError::format(n, "trailing content after the cell block"));
    }

    let exact = tokens.iter().all(|t| matches!(t, Token::Exact(_)));
    Ok(match dim {
        3 => AnyMesh::Tet(Mesh3::build(
            coords(tokens, exact),
            cells.iter().map(|c| [c[0], c[1], c[2], c[3]]).collect(),
        )?),
        _ => AnyMesh::Tri(Mesh2::build(
            coords(tokens, exact),
            cells.iter().map(|c| [c[0], c[1], c[2]]).collect(),
        )?),
    })
}

fn coords<const D: usize>(tokens: Vec<Token>, exact: bool) -> Coords<D> {
    let n = tokens.len() / D;
    let mut it = tokens.into_iter();
    if exact {
        let pts = (0..n)
            .map(|_| {
                std::array::from_fn(|_| match it.next() {
                    Some(Token::Exact(x)) => x,
                    _ => unreachable!("all tokens are exact"),
                })
            })
            .collect();
        Coords::Exact(pts)
    } else {
        let pts = (0..n)
            .map(|_| {
                std::array::from_fn(|_| match it.next() {
                    Some(Token::Exact(x)) => x.to_f64().unwrap_or(f64::NAN),
                    Some(Token::Float(x)) => x,
                    None => unreachable!("token count is a multiple of the dimension"),
                })
            })
            .collect();
        Coords::Float(pts)
    }
}

fn write_coords<const D: usize>(out: &mut String, c: &Coords<D>) {
    match c {
        Coords::Exact(p) => {
            for x in p {
                let row: Vec<String> = x.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        Coords::Float(p) => {
            for x in p {
                let row: Vec<String> = x.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
}

fn write_cells<const N: usize>(out: &mut String, cells: &[[usize; N]]) {
    let _ = writeln!(out, "cells {}", cells.len());
    for c in cells {
        let row: Vec<String> = c.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn write(mesh: &AnyMesh) -> String {
    let mut out = String::new();
    match mesh {
        AnyMesh::Tet(m) => {
            let _ = writeln!(out, "tmesh 3\nvertices {}", m.n_vertices());
            write_coords(&mut out, m.coords());
            write_cells(&mut out, m.cells());
        }
        AnyMesh::Tri(m) => {
            let _ = writeln!(out, "tmesh 2\nvertices {}", m.n_vertices());
            write_coords(&mut out, m.coords());
            write_cells(&mut out, m.cells());
        }
    }
    out
}
