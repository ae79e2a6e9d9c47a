use thiserror::Error;

/// Errors raised by the library. Check failures are never errors; they are
/// reported as violations inside a [`crate::decomp::CheckReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not exactly divisible: {0}")]
    Divisibility(String),
    #[error("operation requires a compact surface model, got {0}")]
    UnsupportedModel(String),
    #[error("label shape mismatch: {0}")]
    Shape(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("torsion labels come from different groups: {0}")]
    GroupMismatch(String),
    #[error("degenerate pairing: {0}")]
    Degenerate(String),
    #[error("refusing n = {n}: feasibility bound for {what} is {bound} (set KP_MAX_N to override)")]
    Infeasible { what: String, n: usize, bound: usize },
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
