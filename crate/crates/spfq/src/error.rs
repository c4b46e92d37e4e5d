use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is too large (must fit in 32 bits)")]
    ModulusTooLarge(u64),

    #[error("operands belong to different fields (q = {0} vs q = {1})")]
    FieldMismatch(u64, u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability {name} = {value} outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("desired sparsity {sd} infeasible for s = {s}, n = {n} (achievable range is [0, {max}])")]
    InfeasibleSparsity { sd: f64, s: f64, n: usize, max: f64 },

    #[error("sparsity mismatch: distribution realizes {expected}, caller supplied {got}")]
    SparsityMismatch { expected: f64, got: f64 },

    #[error("no admissible root in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("multiple admissible roots {0:?}; expected a unique minimizer")]
    MultipleRoots(Vec<f64>),

    #[error("empty feasible interval for p1 (s_avg = {s_avg}, s_delta = {s_delta})")]
    EmptyFeasibleInterval { s_avg: f64, s_delta: f64 },

    #[error("need at least 3 evaluations with distinct points, got {0}")]
    NotEnoughEvaluations(usize),

    #[error("duplicate evaluation point alpha = {0}")]
    DuplicateEvaluation(u64),

    #[error("evaluation at alpha = {0} does not lie on the interpolated polynomial")]
    InconsistentEvaluation(u64),

    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
