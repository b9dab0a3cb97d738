use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("bad dimension: expected {expected}, got {rows}x{cols}")]
    BadDimension { expected: String, rows: usize, cols: usize },

    #[error("photon cutoff n_max = {n_max} is too small for n = {n} (need n_max >= n + 2)")]
    TruncationTooSmall { n: u32, n_max: usize },

    #[error("invalid model parameter: {0}")]
    InvalidParams(String),

    #[error("stationary state requires gamma > 0")]
    NotDecaying,

    #[error("input is not a density matrix within tolerance {tol:.1e}")]
    NotDensityMatrix { tol: f64 },

    #[error("decoherence series tail bound not reached within {k_max} terms (gamma*t*rho(H)^2 = {x:.3})")]
    TailNotConverged { x: f64, k_max: usize },

    #[error("time step {dt:.3e} exceeds the stability bound {bound:.3e}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("reduced state carries a coherence of {magnitude:.3e} at ({row}, {col}) outside the X-shaped support")]
    UnexpectedCoherence { row: usize, col: usize, magnitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
