use thiserror::Error;

use crate::expr::ExprError;
use crate::specialfn::SpecialFnError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Newton iteration for the {n}-point Gauss-Legendre rule did not converge at root {root}")]
    ConvergenceFailure { n: usize, root: usize },

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),

    #[error("non-finite entry at ({row}, {col}) of the Galerkin system: {detail}")]
    NonFiniteEntry { row: usize, col: usize, detail: String },

    #[error("singular matrix: pivot {pivot:e} in column {col}")]
    SingularMatrix { col: usize, pivot: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("problem `{0}` has no exact solution")]
    MissingExact(String),

    #[error("need at least {needed} rows with error above 1e-14, found {found}")]
    InsufficientRows { needed: usize, found: usize },

    #[error("solve failed for N = {order}: {source}")]
    SweepRow {
        order: usize,
        #[source]
        source: Box<Error>,
    },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
