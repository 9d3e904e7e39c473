//! Problem representation, the regularizing transform, assembly of the
//! discrete Galerkin system and evaluation of its solution.

mod assembly;
pub mod linalg;
mod problem;
mod solution;

pub use assembly::{assemble, assemble_with_rule, lu_solve, GalerkinSystem};
pub use linalg::{Matrix, SolveDiagnostics};
pub use problem::{
    kernel_action, reduce_nonhomogeneous, transform_problem, Problem, TransformedProblem, REDUCTION_RULE_POINTS,
    VARS_X, VARS_XT,
};
pub use solution::{eval_solution, eval_transformed, solve, solve_with_system, SpectralSolution};
