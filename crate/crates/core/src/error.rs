use thiserror::Error;

/// Errors produced by the linear-algebra, state, channel and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (violation {violation:e} exceeds {tolerance:e})")]
    NotHermitian { violation: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in matrix data")]
    NonFinite,

    #[error("invalid dimension {0} (must be at least 2)")]
    InvalidDimension(usize),

    #[error("invalid Schmidt rank {rank}: {reason}")]
    InvalidRank { rank: usize, reason: String },

    #[error("parameter {name} = {value} out of range {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not bipartite")]
    NotBipartite,

    #[error("state is not normalized (norm or trace deviates by {0:e})")]
    NotNormalized(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("map is not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("channel is not square: d_in = {d_in}, d_out = {d_out}")]
    NonSquareChannel { d_in: usize, d_out: usize },

    #[error("a channel needs at least one Kraus operator")]
    EmptyKraus,

    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("unknown channel family '{0}'")]
    UnknownFamily(String),

    #[error("unknown verification suite '{0}'")]
    UnknownSuite(String),

    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),

    #[error("channel file: {0}")]
    ChannelFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
