use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible parameters: constraint `{constraint}` cannot be satisfied")]
    Infeasible { constraint: String },

    #[error("all-ones vector is not in the column space; no secret exists")]
    NoSecret,

    #[error("construction failed after {attempts} attempts: {reason}")]
    ConstructionFailed { attempts: usize, reason: String },

    #[error("{qubits} qubits exceeds the simulator cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },

    #[error("obfuscation trace was not retained")]
    TraceUnavailable,

    #[error("candidate secrets are linearly dependent")]
    DependentCandidates,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
