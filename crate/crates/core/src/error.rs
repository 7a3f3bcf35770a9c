use thiserror::Error;

use crate::problem::InfeasibilityWitness;

#[derive(Debug, Error)]
pub enum ClqrError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("matrix is rank deficient: no pivot above tolerance in row {row}")]
    RankDeficient { row: usize },

    #[error("numerical breakdown at stage {stage}: control Hessian is not positive definite")]
    NumericalBreakdown { stage: usize },

    #[error("reduced Hessian is not positive definite (min eigenvalue {min_eig:e})")]
    SingularReducedHessian { min_eig: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("problem is infeasible: {0}")]
    Infeasible(Box<InfeasibilityWitness>),

    #[error("reduction did not terminate within {limit} outer iterations")]
    NonTermination { limit: usize },

    #[error("invalid problem document: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = ClqrError> = std::result::Result<T, E>;
