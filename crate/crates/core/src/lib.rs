//! Tetrahedral mesh generation, Alfeld and Worsey–Farin splits, red
//! refinement, entity counting, and dimension counts for divergence-free
//! finite element pairs.

pub mod counts;
pub mod error;
pub mod fespace;
pub mod generators;
pub mod geometry;
pub mod mesh;
pub mod mesh2d;
pub mod oracle;
pub mod quality;
pub mod refinement;
pub mod singular;
pub mod splits;
pub mod validate;

pub use counts::{counts, vertex_stars, MeshCounts, VertexStar};
pub use error::{Error, Result};
pub use fespace::{
    asymptotic_dims, dim_dg, dim_lagrange, dims, stokes_gap, AffineForm, DimReport, FePair,
    FePairSpec, PressureExactness, StokesGapReport,
};
pub use generators::{generate, GeneratorSpec};
pub use mesh::{Coords, EntityTables, Mesh3};
pub use mesh2d::{counts2, split2, Mesh2, MeshCounts2, Split2Kind};
pub use oracle::{assemble_div, div_rank, DivAssembly, DivRankResult, OracleConfig};
pub use refinement::{
    predict_counts, predict_red_counts, refine_red, refine_sequence, CountTrajectory, DiagonalRule,
    RefineKind, RefineScheme, SequenceOptions,
};
pub use splits::{predict_split_counts, split, InteriorPoint, SplitFamily, SplitKind};
pub use validate::{validate, ValidationReport, Violation};
