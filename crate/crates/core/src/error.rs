use thiserror::Error;

/// Failure modes of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ‖H − H†‖_F = {dev:.3e} exceeds gate {gate:.3e}")]
    NonHermitian { dev: f64, gate: f64 },

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("bad spectra: {0}")]
    BadSpectra(String),

    #[error("unsharpness {0} outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("degenerate basis: every outcome operator is positive semidefinite")]
    DegenerateBasis,

    #[error("half-space system is unbounded along {0:?}")]
    UnboundedRegion(Vec<f64>),

    #[error("vertex clustering is ambiguous: {fine} vertices at 1e-7 vs {coarse} at 1e-6")]
    NumericalDegeneracy { fine: usize, coarse: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no conjugation convention diagonalizes the commuting families")]
    NoDiagonalizingConvention,

    #[error("linear program exceeded the iteration cap")]
    LpStalled,

    #[error("file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
