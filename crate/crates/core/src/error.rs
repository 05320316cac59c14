use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Error)]
pub enum ChowError {
    #[error("parts {0:?} are not weakly decreasing")]
    InvalidPartition(Vec<u32>),
    #[error("invalid box {rows}x{cols}")]
    InvalidBox { rows: usize, cols: u32 },
    #[error("partition {partition} does not fit the {rows}x{cols} box")]
    NotInBox { partition: Partition, rows: usize, cols: u32 },
    #[error("series truncation degrees differ: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("series with constant term {0} is not a unit")]
    NotUnit(String),
    #[error("invalid Grassmannian Gr({k}, {n})")]
    InvalidGrassmannian { k: usize, n: usize },
    #[error("elements live on different spaces")]
    SpaceMismatch,
    #[error("{0}")]
    WrongSpaceKind(String),
    #[error("expected a class of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("Adams operation psi^{0} is not supported")]
    UnsupportedAdams(u32),
    #[error("Sym^{0} is not supported")]
    UnsupportedSym(u32),
    #[error("expected virtual rank {expected}, found {actual}")]
    RankMismatch { expected: i64, actual: i64 },
    #[error("change of basis is singular in degree {0}")]
    SingularConversion(usize),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = ChowError> = std::result::Result<T, E>;
