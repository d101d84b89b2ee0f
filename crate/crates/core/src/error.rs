use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at flat index {0}")]
    NonFinite(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("invariant `{name}` violated (error {error:e})")]
    Invariant { name: &'static str, error: f64 },

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("POVM completeness violated (max deviation {0:e})")]
    Incomplete(f64),

    #[error("Omega is singular at |sin(alpha)| = {0:e}; use the metric route")]
    SingularOmega(f64),

    #[error("post-selection probability {0:e} is too small to filter")]
    FilterImpossible(f64),
}
