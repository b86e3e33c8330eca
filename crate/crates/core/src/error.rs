use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {mode} out of range for {num_modes} modes")]
    ModeOutOfRange { mode: usize, num_modes: usize },

    #[error("register size mismatch: expected {expected} qubits, found {found}")]
    RegisterMismatch { expected: usize, found: usize },

    #[error("{what}: requested {requested}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: entry violates crystal momentum conservation ({detail})")]
    MomentumViolation { line: usize, detail: String },

    #[error("line {line}: integral is not Hermitian (deviation {deviation:.3e})")]
    NonHermitian { line: usize, deviation: f64 },

    #[error("invalid integral table: {0}")]
    InvalidTable(String),

    #[error("ambiguous open-shell filling: {0}")]
    OpenShell(String),

    #[error("generator is not anti-Hermitian (max deviation {0:.3e})")]
    NotAntiHermitian(f64),

    #[error("generator Pauli strings do not commute; refusing to Trotterize")]
    NonCommutingGenerator,

    #[error("excitation basis is empty")]
    EmptyBasis,

    #[error("sector with {n_electrons} electrons and 2*Sz = {twice_sz} is empty")]
    EmptySector { n_electrons: usize, twice_sz: i32 },

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid noise specification: {0}")]
    InvalidNoise(String),

    #[error("extrapolation needs at least two distinct scale factors")]
    DegenerateScales,

    #[error("optimizer failed after {iterations} iterations: {message}")]
    Optimizer { iterations: usize, message: String },

    #[error("checkpoint does not match pool: {0}")]
    Checkpoint(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the failure stems from malformed or inconsistent input data.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::MomentumViolation { .. }
                | Error::NonHermitian { .. }
                | Error::InvalidTable(_)
                | Error::OpenShell(_)
                | Error::InvalidInput(_)
                | Error::InvalidNoise(_)
                | Error::Checkpoint(_)
                | Error::Io { .. }
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}
