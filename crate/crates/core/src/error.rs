use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("polyhedron is unbounded; decompose it first")]
    Unbounded,

    #[error("interpolation system is singular or ill-conditioned (estimate {condition:e}); increase l0")]
    IllConditioned { condition: f64 },

    #[error("expansion exceeds the term budget of {budget} terms")]
    TermBudget { budget: usize },

    #[error("heuristic failed: {0}")]
    Heuristic(String),

    #[error("sampling degenerate: acceptance rate {rate:e} below 1e-4")]
    SamplingDegenerate { rate: f64 },

    #[error("search budget exhausted after {attempts} attempts")]
    BudgetExhausted { attempts: usize },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
