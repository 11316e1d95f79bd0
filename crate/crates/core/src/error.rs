use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mesh has no vertices or no cells")]
    EmptyMesh,
    #[error("cell {cell} references vertex {index}, but the mesh has {len} vertices")]
    IndexOutOfRange {
        cell: usize,
        index: usize,
        len: usize,
    },
    #[error("cell {cell} has zero volume")]
    DegenerateCell { cell: usize },
    #[error("cell {cell} duplicates cell {first}")]
    DuplicateCell { cell: usize, first: usize },
    #[error("cell {cell} is numerically flat, solid angles undefined")]
    DegenerateAngle { cell: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("invalid polynomial degree {0}")]
    InvalidDegree(u32),
    #[error("unsupported element pair: {0}")]
    UnsupportedPair(String),
    #[error("mesh would exceed the cell budget of {cap} cells ({needed} needed)")]
    MemoryBudgetExceeded { cap: usize, needed: usize },
    #[error("divergence oracle needs exact rational coordinates")]
    NonRationalMesh,
    #[error("degree {degree} exceeds the oracle degree cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("mesh has {cells} cells, oracle cap is {cap}")]
    CellCapExceeded { cells: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
