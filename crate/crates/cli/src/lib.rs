//! Command-line front end: generators, splits, refinement, counting,
//! dimension tables and the divergence oracle over TMESH files.

pub mod error;
pub mod report;
pub mod tmesh;
pub mod vtk;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use tetra_census::fespace::FePair;
use tetra_census::mesh2d::{
    dims2, predict_red2, refine_red2, single_triangle, square4, unit_square, InteriorPoint2, Pair2,
    Split2Kind,
};
use tetra_census::oracle::VelocityBoundary;
use tetra_census::quality::solid_angles;
use tetra_census::singular::singular_edges;
use tetra_census::{
    assemble_div, asymptotic_dims, counts, counts2, dims, div_rank, generate, refine_sequence,
    split, split2, validate, vertex_stars, DiagonalRule, FePairSpec, GeneratorSpec, InteriorPoint,
    Mesh2, Mesh3, OracleConfig, RefineScheme, SequenceOptions, SplitKind,
};

pub use error::CliError;
use report::CountRow;
use tmesh::AnyMesh;

/// Environment variable overriding the oracle's cell cap.
pub const CELL_CAP_ENV: &str = "TETRA_CENSUS_CELL_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "tetra-census",
    version,
    about = "Simplicial mesh census and divergence-free element dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated mesh.
    Generate(GenerateArgs),
    /// Apply a macro-element split.
    Split(SplitArgs),
    /// Refine repeatedly, optionally writing the count trajectory.
    Refine(RefineArgs),
    /// Entity counts and averages.
    Count(CountArgs),
    /// Velocity and pressure space dimensions.
    Dims(DimsArgs),
    /// Exact rank of the discrete divergence.
    Divrank(DivrankArgs),
    /// Conformity and counting identities; exits 1 on failure.
    Check(InputArgs),
    /// Write a legacy VTK file.
    ExportVtk(ConvertArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input TMESH file; standard input when omitted or `-`.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output file; standard output when omitted or `-`.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Tet,
    Freudenthal,
    Star,
    Diamond,
    Triangle,
    Square,
    Square4,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    /// Box counts for `freudenthal`, as `NxMxL`.
    #[arg(long, default_value = "1x1x1")]
    pub dims: String,
    /// Number of equator points for `diamond`.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Number of boundary vertices for `star`.
    #[arg(long, default_value_t = 6)]
    pub vb: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Alfeld,
    WorseyFarin,
    Alfeld2,
    PowellSabin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PointArg {
    Barycenter,
    Incenter,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long, value_enum)]
    pub kind: SplitArg,
    /// Defaults to the barycenter for Alfeld splits and the incenter otherwise.
    #[arg(long, value_enum)]
    pub interior_point: Option<PointArg>,
    #[command(flatten)]
    pub io: ConvertArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Red,
    Alfeld,
    WorseyFarin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DiagonalArg {
    Kuhn,
    Shortest,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    #[arg(long, value_enum, default_value = "red")]
    pub scheme: SchemeArg,
    #[arg(long)]
    pub levels: u32,
    #[arg(long, value_enum, default_value = "kuhn")]
    pub diagonal: DiagonalArg,
    #[command(flatten)]
    pub input: InputArgs,
    /// Refined mesh. Written to standard output when neither `-o` nor
    /// `--series` is given.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Per-level counts as CSV (`-` for standard output). Levels past the
    /// cell cap come from the count recurrences.
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Largest mesh built in memory.
    #[arg(long, default_value_t = 100_000)]
    pub cell_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Per-vertex star sizes and solid angles.
    #[arg(long)]
    pub per_vertex: bool,
    #[arg(long)]
    pub singular_edges: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: CountFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Md,
    Csv,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    /// Mesh for exact dimensions; not needed with `--asymptotic`.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Element pairs, comma separated: sv<k>, alfeld<k>, wf1, wf2, and for
    /// triangle meshes alfeld2_k2, ps_k1, sv2d_k4.
    #[arg(long, value_delimiter = ',', default_value = "wf1,wf2,alfeld3,sv4,sv6")]
    pub pair: Vec<String>,
    /// Per-vertex forms `(a·ē + b)·V`.
    #[arg(long)]
    pub asymptotic: bool,
    /// Evaluate the forms at this `ē`; defaults to the input mesh's value.
    #[arg(long)]
    pub ebar: Option<String>,
    #[arg(long, value_enum, default_value = "md")]
    pub format: TableFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Free,
    Dirichlet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ResultFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct DivrankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub degree: u32,
    /// Velocities free everywhere, or zero on boundary faces.
    #[arg(long, value_enum, default_value = "free")]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = OracleConfig::default().degree_cap)]
    pub degree_cap: u32,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ResultFormat,
}

fn is_stdio(p: &Option<PathBuf>) -> bool {
    p.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn read_text(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    if is_stdio(path) {
        stdin.read_to_string(&mut text)?;
    } else {
        let p = path.as_deref().expect("checked above");
        text = std::fs::read_to_string(p)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
    }
    Ok(text)
}

fn write_text(path: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    if is_stdio(path) {
        stdout.write_all(text.as_bytes())?;
    } else {
        let p = path.as_deref().expect("checked above");
        std::fs::write(p, text)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn read_mesh(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<(String, AnyMesh), CliError> {
    let text = read_text(path, stdin)?;
    let mesh = tmesh::read(&text)?;
    Ok((text, mesh))
}

pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a, stdout),
        Command::Split(a) => cmd_split(a, stdin, stdout),
        Command::Refine(a) => cmd_refine(a, stdin, stdout),
        Command::Count(a) => cmd_count(a, stdin, stdout),
        Command::Dims(a) => cmd_dims(a, stdin, stdout),
        Command::Divrank(a) => cmd_divrank(a, stdin, stdout),
        Command::Check(a) => cmd_check(a, stdin, stdout),
        Command::ExportVtk(a) => {
            let (_, mesh) = read_mesh(&a.input.input, stdin)?;
            write_text(&a.output, &vtk::write(&mesh), stdout)
        }
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize, usize), CliError> {
    let parts: Vec<usize> = s
        .split('x')
        .map(|p| p.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("invalid --dims `{s}`, expected NxMxL")))?;
    match parts[..] {
        [n, m, l] => Ok((n, m, l)),
        _ => Err(CliError::Usage(format!(
            "invalid --dims `{s}`, expected NxMxL"
        ))),
    }
}

fn cmd_generate(a: GenerateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mesh = match a.shape {
        Shape::Tet => AnyMesh::Tet(generate(&GeneratorSpec::single_tet())?),
        Shape::Freudenthal => {
            let (n, m, l) = parse_dims(&a.dims)?;
            AnyMesh::Tet(generate(&GeneratorSpec::freudenthal(n, m, l))?)
        }
        Shape::Star => AnyMesh::Tet(generate(&GeneratorSpec::star(a.vb))?),
        Shape::Diamond => AnyMesh::Tet(generate(&GeneratorSpec::diamond(a.k))?),
        Shape::Triangle => AnyMesh::Tri(single_triangle()),
        Shape::Square => AnyMesh::Tri(unit_square()),
        Shape::Square4 => AnyMesh::Tri(square4()),
    };
    write_text(&a.output, &tmesh::write(&mesh), stdout)
}

fn cmd_split(a: SplitArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (_, mesh) = read_mesh(&a.io.input.input, stdin)?;
    let point3 = |default| match a.interior_point.unwrap_or(default) {
        PointArg::Barycenter => InteriorPoint::Barycenter,
        PointArg::Incenter => InteriorPoint::Incenter,
    };
    let out = match (&mesh, a.kind) {
        (AnyMesh::Tet(m), SplitArg::Alfeld) => {
            let kind = SplitKind::alfeld().with_interior_point(point3(PointArg::Barycenter));
            AnyMesh::Tet(split(m, kind)?)
        }
        (AnyMesh::Tet(m), SplitArg::WorseyFarin) => {
            let kind = SplitKind::worsey_farin().with_interior_point(point3(PointArg::Incenter));
            AnyMesh::Tet(split(m, kind)?)
        }
        (AnyMesh::Tri(m), SplitArg::Alfeld2) => {
            if a.interior_point == Some(PointArg::Incenter) {
                return Err(CliError::Usage(
                    "alfeld2 splits at the barycenter only".into(),
                ));
            }
            AnyMesh::Tri(split2(m, Split2Kind::Alfeld2)?)
        }
        (AnyMesh::Tri(m), SplitArg::PowellSabin) => {
            let p = match a.interior_point.unwrap_or(PointArg::Incenter) {
                PointArg::Barycenter => InteriorPoint2::Barycenter,
                PointArg::Incenter => InteriorPoint2::Incenter,
            };
            AnyMesh::Tri(split2(m, Split2Kind::PowellSabin(p))?)
        }
        (m, kind) => {
            return Err(CliError::Usage(format!(
                "split kind {} does not apply to a {}D mesh",
                kind.to_possible_value()
                    .expect("no skipped variants")
                    .get_name(),
                m.dim()
            )))
        }
    };
    write_text(&a.io.output, &tmesh::write(&out), stdout)
}

fn cmd_refine(a: RefineArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (text, mesh) = read_mesh(&a.input.input, stdin)?;
    let want_mesh = a.output.is_some() || a.series.is_none();
    let rule = match a.diagonal {
        DiagonalArg::Kuhn => DiagonalRule::KuhnConsistent,
        DiagonalArg::Shortest => DiagonalRule::Shortest,
    };
    let options = SequenceOptions {
        cell_cap: a.cell_cap,
        continue_past_cap: !want_mesh,
    };
    let (rows, refined): (Vec<CountRow>, Option<String>) = match &mesh {
        AnyMesh::Tet(m) => {
            let scheme = match a.scheme {
                SchemeArg::Red => RefineScheme::red(rule),
                SchemeArg::Alfeld => RefineScheme::repeated_alfeld(),
                SchemeArg::WorseyFarin => RefineScheme::repeated_worsey_farin(),
            };
            let (traj, last) = refine_sequence(m, scheme, a.levels, options)?;
            let rows = traj.levels.iter().map(CountRow::from).collect();
            (rows, last.map(|m| tmesh::write(&AnyMesh::Tet(m))))
        }
        AnyMesh::Tri(m) => {
            if a.scheme != SchemeArg::Red {
                return Err(CliError::Usage(
                    "triangle meshes support red refinement only".into(),
                ));
            }
            let (rows, last) = refine2(m, a.levels, options)?;
            (rows, last.map(|m| tmesh::write(&AnyMesh::Tri(m))))
        }
    };
    if let Some(series) = &a.series {
        write_text(&Some(series.clone()), &report::series_csv(&rows), stdout)?;
    }
    if want_mesh {
        // Zero levels reproduce the input file exactly, comments included.
        let body = if a.levels == 0 {
            text
        } else {
            refined.expect("mesh kept when requested")
        };
        write_text(&a.output, &body, stdout)?;
    }
    Ok(())
}

fn refine2(
    mesh: &Mesh2,
    levels: u32,
    options: SequenceOptions,
) -> Result<(Vec<CountRow>, Option<Mesh2>), CliError> {
    let mut c = counts2(mesh);
    let mut rows = vec![CountRow::from(&c)];
    let mut current: Option<Mesh2> = None;
    let mut built = true;
    for _ in 0..levels {
        let next = predict_red2(&c);
        if built && next.t as usize <= options.cell_cap {
            let m = refine_red2(current.as_ref().unwrap_or(mesh));
            c = counts2(&m);
            current = Some(m);
        } else if options.continue_past_cap {
            built = false;
            current = None;
            c = next;
        } else {
            return Err(tetra_census::Error::MemoryBudgetExceeded {
                cap: options.cell_cap,
                needed: next.t as usize,
            }
            .into());
        }
        rows.push(CountRow::from(&c));
    }
    if levels == 0 {
        return Ok((rows, None));
    }
    Ok((rows, current))
}

#[derive(Serialize)]
struct VertexRow {
    vertex: usize,
    interior: bool,
    e: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<usize>,
    t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle_sum: Option<f64>,
}

#[derive(Serialize)]
struct CountJson {
    #[serde(flatten)]
    counts: CountRow,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    singular_edges: Option<Vec<[usize; 2]>>,
}

fn vertex_rows3(m: &Mesh3) -> Result<Vec<VertexRow>, CliError> {
    let angles = solid_angles(m)?;
    Ok(vertex_stars(m)
        .into_iter()
        .map(|s| {
            let a = &angles.per_vertex[s.vertex];
            VertexRow {
                vertex: s.vertex,
                interior: s.interior,
                e: s.edges,
                f: Some(s.faces),
                t: s.cells,
                min_angle: Some(a.min),
                mean_angle: Some(a.mean),
                angle_sum: Some(a.sum),
            }
        })
        .collect())
}

/// Edges and triangles at each vertex, with the corner angle sum.
fn vertex_rows2(m: &Mesh2) -> Vec<VertexRow> {
    let t = m.tables();
    let mut e = vec![0; m.n_vertices()];
    for [a, b] in &t.edges {
        e[*a] += 1;
        e[*b] += 1;
    }
    let mut cells = vec![0; m.n_vertices()];
    let mut sum = vec![0.0; m.n_vertices()];
    let mut min = vec![f64::INFINITY; m.n_vertices()];
    for c in m.cells() {
        let p = c.map(|v| m.coords().point_f64(v));
        for i in 0..3 {
            let (a, b, o) = (p[(i + 1) % 3], p[(i + 2) % 3], p[i]);
            let u = [a[0] - o[0], a[1] - o[1]];
            let w = [b[0] - o[0], b[1] - o[1]];
            let angle = (u[0] * w[1] - u[1] * w[0])
                .atan2(u[0] * w[0] + u[1] * w[1])
                .abs();
            cells[c[i]] += 1;
            sum[c[i]] += angle;
            min[c[i]] = min[c[i]].min(angle);
        }
    }
    (0..m.n_vertices())
        .map(|v| VertexRow {
            vertex: v,
            interior: !t.vertex_boundary[v],
            e: e[v],
            f: None,
            t: cells[v],
            min_angle: Some(min[v]),
            mean_angle: Some(sum[v] / cells[v] as f64),
            angle_sum: Some(sum[v]),
        })
        .collect()
}

fn vertex_table(rows: &[VertexRow], csv: bool) -> String {
    let three_d = rows.first().is_some_and(|r| r.f.is_some());
    let mut header = vec!["vertex", "interior", "e"];
    if three_d {
        header.push("f");
    }
    header.extend(["t", "min_angle", "mean_angle", "angle_sum"]);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![
                r.vertex.to_string(),
                r.interior.to_string(),
                r.e.to_string(),
            ];
            if let Some(f) = r.f {
                row.push(f.to_string());
            }
            row.push(r.t.to_string());
            for x in [r.min_angle, r.mean_angle, r.angle_sum] {
                row.push(x.map_or_else(String::new, |v| report::sig(v, 12)));
            }
            row
        })
        .collect();
    join_rows(&header, &body, csv)
}

fn join_rows(header: &[&str], body: &[Vec<String>], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        let _ = writeln!(out, "{}", header.join(","));
        for r in body {
            let _ = writeln!(out, "{}", r.join(","));
        }
        return out;
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|j| {
            body.iter()
                .map(|r| r[j].len())
                .chain([header[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ")
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for r in body {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn cmd_count(a: CountArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (_, mesh) = read_mesh(&a.input.input, stdin)?;
    let (row, vertices, singular) = match &mesh {
        AnyMesh::Tet(m) => {
            let vertices = if a.per_vertex {
                Some(vertex_rows3(m)?)
            } else {
                None
            };
            let singular = a.singular_edges.then(|| {
                let t = m.tables();
                singular_edges(m, 1e-9)
                    .into_iter()
                    .map(|e| t.edges[e])
                    .collect::<Vec<_>>()
            });
            (CountRow::from(&counts(m)), vertices, singular)
        }
        AnyMesh::Tri(m) => {
            if a.singular_edges {
                return Err(CliError::Usage(
                    "singular edges are defined for tetrahedral meshes".into(),
                ));
            }
            (
                CountRow::from(&counts2(m)),
                a.per_vertex.then(|| vertex_rows2(m)),
                None,
            )
        }
    };
    let text = match a.format {
        CountFormat::Json => {
            let doc = CountJson {
                counts: row,
                vertices,
                singular_edges: singular,
            };
            serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
        }
        CountFormat::Csv | CountFormat::Table => {
            let csv = a.format == CountFormat::Csv;
            let mut out = if csv { row.to_csv() } else { row.to_table() };
            if let Some(v) = &vertices {
                out.push('\n');
                out.push_str(&vertex_table(v, csv));
            }
            if let Some(s) = &singular {
                out.push('\n');
                if csv {
                    out.push_str("a,b\n");
                } else {
                    let _ = writeln!(out, "singular edges: {}", s.len());
                }
                for [x, y] in s {
                    let _ = writeln!(out, "{x}{}{y}", if csv { "," } else { " " });
                }
            }
            out
        }
    };
    write_text(&None, &text, stdout)
}

enum AnyPair {
    Tet(FePair),
    Tri(Pair2),
}

fn parse_pair(s: &str) -> Result<AnyPair, CliError> {
    if let Ok(p) = s.parse::<Pair2>() {
        return Ok(AnyPair::Tri(p));
    }
    let p: FePair = s
        .parse()
        .map_err(|e: tetra_census::Error| CliError::Usage(e.to_string()))?;
    Ok(AnyPair::Tet(p))
}

fn pair_name2(p: Pair2) -> &'static str {
    match p {
        Pair2::Alfeld2K2 => "alfeld2_k2",
        Pair2::PsK1 => "ps_k1",
        Pair2::Sv2dK4 => "sv2d_k4",
    }
}

fn cmd_dims(a: DimsArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mesh = if a.input.is_some() || !a.asymptotic {
        Some(read_mesh(&a.input, stdin)?.1)
    } else {
        None
    };
    let pairs: Vec<AnyPair> = a
        .pair
        .iter()
        .map(|s| parse_pair(s.trim()))
        .collect::<Result<_, _>>()?;
    let csv = a.format == TableFormat::Csv;
    let mut out = String::new();

    if let Some(mesh) = &mesh {
        let header = [
            "pair",
            "velocity",
            "pressure",
            "pressure_kind",
            "total",
            "dg",
            "missing_modes",
        ];
        let mut body = Vec::new();
        for p in &pairs {
            let row = match (mesh, p) {
                (AnyMesh::Tet(m), AnyPair::Tet(pair)) => {
                    let r = dims(&FePairSpec {
                        pair: *pair,
                        counts: counts(m),
                    })?;
                    vec![
                        pair.to_string(),
                        r.dim_velocity.to_string(),
                        r.dim_pressure_upper.to_string(),
                        exactness(r.pressure_exactness),
                        r.dim_total.to_string(),
                        r.dim_dg.to_string(),
                        r.missing_modes.map_or_else(String::new, |x| x.to_string()),
                    ]
                }
                (AnyMesh::Tri(m), AnyPair::Tri(pair)) => {
                    let r = dims2(*pair, &counts2(m));
                    vec![
                        pair_name2(*pair).to_string(),
                        r.dim_velocity.to_string(),
                        r.dim_pressure_upper.to_string(),
                        exactness(r.pressure_exactness),
                        r.dim_total.to_string(),
                        r.dim_dg.to_string(),
                        String::new(),
                    ]
                }
                (m, _) => {
                    return Err(CliError::Usage(format!(
                        "pair does not match the {}D input mesh",
                        m.dim()
                    )))
                }
            };
            body.push(row);
        }
        out.push_str(&table(&header, &body, csv));
    }

    if a.asymptotic {
        let ebar = match (&a.ebar, &mesh) {
            (Some(s), _) => Some(report::parse_rational(s)?),
            (None, Some(AnyMesh::Tet(m))) => counts(m).ebar(),
            (None, _) => None,
        };
        if !out.is_empty() {
            out.push('\n');
        }
        let mut header = vec!["pair", "velocity", "pressure", "total"];
        if ebar.is_some() {
            header.extend([
                "ebar",
                "velocity_at_ebar",
                "pressure_at_ebar",
                "total_at_ebar",
            ]);
        }
        let mut body = Vec::new();
        for p in &pairs {
            let mut row;
            match p {
                AnyPair::Tet(pair) => {
                    let (v, pr) = asymptotic_dims(*pair)?;
                    let t = v + pr;
                    row = vec![
                        pair.to_string(),
                        v.to_string(),
                        pr.to_string(),
                        t.to_string(),
                    ];
                    if let Some(e) = ebar {
                        row.push(report::rational(e));
                        for f in [v, pr, t] {
                            row.push(format!("{}V", report::rational(f.eval(e))));
                        }
                    }
                }
                AnyPair::Tri(pair) => {
                    let r = dims2(*pair, &tetra_census::MeshCounts2::default());
                    let per_v = |x: Rational64| format!("{}V", report::rational(x));
                    row = vec![
                        pair_name2(*pair).to_string(),
                        per_v(r.asymptotic_velocity),
                        per_v(r.asymptotic_pressure_upper),
                        per_v(r.asymptotic_total),
                    ];
                    if let Some(e) = ebar {
                        row.push(report::rational(e));
                        row.extend([row[1].clone(), row[2].clone(), row[3].clone()]);
                    }
                }
            }
            body.push(row);
        }
        out.push_str(&table(&header, &body, csv));
    }
    write_text(&None, &out, stdout)
}

fn exactness(p: tetra_census::PressureExactness) -> String {
    use tetra_census::PressureExactness::*;
    match p {
        Exact => "exact",
        UpperBound => "upper_bound",
        FullDgProxy => "full_dg",
    }
    .to_string()
}

/// GitHub pipe table or CSV.
fn table(header: &[&str], body: &[Vec<String>], csv: bool) -> String {
    if csv {
        return join_rows(header, body, true);
    }
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(
        out,
        "|{}",
        header.iter().map(|_| "---|").collect::<String>()
    );
    for r in body {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out
}

fn oracle_cell_cap() -> Result<usize, CliError> {
    match std::env::var(CELL_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("{CELL_CAP_ENV} must be a cell count, got `{v}`"))
        }),
        Err(_) => Ok(OracleConfig::default().cell_cap),
    }
}

fn cmd_divrank(
    a: DivrankArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (_, mesh) = read_mesh(&a.input.input, stdin)?;
    let AnyMesh::Tet(m) = mesh else {
        return Err(CliError::Usage("divrank needs a tetrahedral mesh".into()));
    };
    let config = OracleConfig {
        cell_cap: oracle_cell_cap()?,
        degree_cap: a.degree_cap,
        boundary: match a.boundary {
            BoundaryArg::Free => VelocityBoundary::Free,
            BoundaryArg::Dirichlet => VelocityBoundary::Dirichlet,
        },
    };
    let r = div_rank(&assemble_div(&m, a.degree, &config)?);
    let text = match a.format {
        ResultFormat::Json => {
            serde_json::to_string_pretty(&r).expect("plain data serializes") + "\n"
        }
        ResultFormat::Table => {
            let boundary = match r.boundary {
                VelocityBoundary::Free => "free",
                VelocityBoundary::Dirichlet => "dirichlet",
            };
            let mut out = String::new();
            for (k, v) in [
                ("degree", r.degree.to_string()),
                ("boundary", boundary.to_string()),
                ("vertices", r.n_vertices.to_string()),
                ("cells", r.n_cells.to_string()),
                ("dim_velocity", r.dim_velocity.to_string()),
                ("dim_dg", r.dim_dg.to_string()),
                ("rank", r.rank.to_string()),
                ("rank_mean_zero", r.rank_mean_zero.to_string()),
                ("missing_modes", r.missing_modes().to_string()),
            ] {
                let _ = writeln!(out, "{k:<16}{v}");
            }
            out
        }
    };
    write_text(&None, &text, stdout)
}

struct Checks {
    out: String,
    failed: usize,
}

impl Checks {
    fn record(&mut self, ok: bool, name: &str, detail: String) {
        let _ = writeln!(
            self.out,
            "{:<5} {name}: {detail}",
            if ok { "ok" } else { "FAIL" }
        );
        self.failed += usize::from(!ok);
    }
}

fn cmd_check(a: InputArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (_, mesh) = read_mesh(&a.input, stdin)?;
    let mut ch = Checks {
        out: String::new(),
        failed: 0,
    };
    match &mesh {
        AnyMesh::Tet(m) => check3(m, &mut ch),
        AnyMesh::Tri(m) => check2(m, &mut ch),
    }
    write_text(&None, &ch.out, stdout)?;
    if ch.failed > 0 {
        return Err(CliError::Check(format!("{} check(s) failed", ch.failed)));
    }
    Ok(())
}

fn check3(m: &Mesh3, ch: &mut Checks) {
    let report = validate(m);
    let detail = if report.violations.is_empty() {
        "no violations".to_string()
    } else {
        report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    };
    ch.record(report.is_conforming(), "conformity", detail);
    ch.record(
        true,
        "orientation",
        format!("{} cell(s) reoriented on input", m.orientation_fixes()),
    );
    let c = counts(m);
    ch.record(c.chi() == 1, "euler", format!("V-E+F-T = {}", c.chi()));
    ch.record(
        c.chi_b() == 2,
        "boundary euler",
        format!("Vb-Eb+Fb = {}", c.chi_b()),
    );
    ch.record(
        2 * c.f - c.fb == 4 * c.t,
        "marble",
        format!("2F-Fb = {}, 4T = {}", 2 * c.f - c.fb, 4 * c.t),
    );
    ch.record(
        3 * c.fb == 2 * c.eb,
        "boundary marble",
        format!("3Fb = {}, 2Eb = {}", 3 * c.fb, 2 * c.eb),
    );
    let stars = vertex_stars(m);
    let interior: Vec<_> = stars.iter().filter(|s| s.interior).collect();
    let bad: Vec<_> = interior
        .iter()
        .filter(|s| !s.star_identities_hold())
        .map(|s| s.vertex)
        .collect();
    ch.record(
        bad.is_empty(),
        "star identities",
        format!(
            "f = 3(e-2), t = 2(e-2) at {} interior vertices, {} violations {bad:?}",
            interior.len(),
            bad.len()
        ),
    );
    match solid_angles(m) {
        Ok(angles) => {
            let worst = interior
                .iter()
                .map(|s| (angles.per_vertex[s.vertex].sum - 4.0 * PI).abs() / (4.0 * PI))
                .fold(0.0, f64::max);
            ch.record(
                worst <= 1e-9,
                "solid angles",
                format!("interior sums equal 4π to {worst:.1e}"),
            );
        }
        Err(e) => ch.record(false, "solid angles", e.to_string()),
    }
}

fn check2(m: &Mesh2, ch: &mut Checks) {
    let c = counts2(m);
    ch.record(c.chi() == 1, "euler", format!("V-E+T = {}", c.chi()));
    ch.record(
        c.chi_b() == 0,
        "boundary euler",
        format!("Vb-Eb = {}", c.chi_b()),
    );
    ch.record(
        c.marble_identity_holds(),
        "marble",
        format!("3T = {}, 2E-Eb = {}", 3 * c.t, 2 * c.e - c.eb),
    );
    let rows = vertex_rows2(m);
    let interior: Vec<_> = rows.iter().filter(|r| r.interior).collect();
    let bad: Vec<_> = interior
        .iter()
        .filter(|r| r.e != r.t)
        .map(|r| r.vertex)
        .collect();
    ch.record(
        bad.is_empty(),
        "star identities",
        format!(
            "t = e at {} interior vertices, {} violations {bad:?}",
            interior.len(),
            bad.len()
        ),
    );
    let worst = interior
        .iter()
        .map(|r| (r.angle_sum.unwrap_or(0.0) - 2.0 * PI).abs() / (2.0 * PI))
        .fold(0.0, f64::max);
    ch.record(
        worst <= 1e-9,
        "angles",
        format!("interior sums equal 2π to {worst:.1e}"),
    );
}
