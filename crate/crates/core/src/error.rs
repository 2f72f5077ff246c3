use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n} qubits exceeds the limit of {limit} for this operation")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("state is not an eigenvector (residual {residual:.3e})")]
    NotEigenstate { residual: f64 },

    #[error("eigenvalue level is degenerate (multiplicity {multiplicity}, parent ground space {parent_ground_dimension})")]
    DegenerateLevel { multiplicity: usize, parent_ground_dimension: usize },

    #[error("no coupling on the scan grid certifies the state")]
    NoValidCoupling,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
