use thiserror::Error;

use crate::descent::DescentTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix does not have the declared structure: {0}")]
    Structure(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("elements belong to different algebras ({left} vs {right})")]
    ParentMismatch { left: String, right: String },

    #[error("search failed after {iterations} attempts: {what}")]
    SearchFailure { what: String, iterations: usize },

    #[error("subspace is not invariant under the normalizer element (residual {residual:.3e})")]
    Normalizer { residual: f64 },

    #[error("conjugation to the standard Cartan failed (residual {residual:.3e})")]
    Conjugation { residual: f64 },

    #[error("target is not in the bracket image (residual {residual:.3e})")]
    Infeasible { residual: f64 },

    #[error("descent did not converge in {} steps (Cartan component {:.3e})", .trace.iterations, .trace.final_cartan_norm())]
    NonConvergence { trace: Box<DescentTrace> },

    #[error("root basis relations violated (residual {residual:.3e})")]
    RootBasis { residual: f64 },

    #[error("root space decomposition failed: {0}")]
    Decomposition(String),

    #[error("malformed input: {0}")]
    Input(String),
}
