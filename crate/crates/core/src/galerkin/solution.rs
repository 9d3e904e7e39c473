use serde::Serialize;

use crate::basis::test_values;
use crate::error::{invalid, Result};
use crate::fracops::psi_table;
use crate::galerkin::assembly::{assemble, lu_solve, GalerkinSystem};
use crate::galerkin::problem::{reduce_nonhomogeneous, transform_problem, Problem};

/// Galerkin coefficients `a_1..a_N` of `ū_N(v) = Σ a_i G_i(v)` together
/// with solve diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSolution {
    pub q: f64,
    pub order: usize,
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub condition_estimate: f64,
    /// u(0) of the original problem; `eval_solution` returns the
    /// homogeneous part, [`eval_original`](Self::eval_original) adds this.
    pub initial_value: f64,
    /// The Ψ table behind the system carried a monomial conditioning warning.
    pub conditioning_warning: bool,
}

impl SpectralSolution {
    /// Solution with the given coefficients and empty diagnostics.
    pub fn from_coefficients(q: f64, coefficients: Vec<f64>) -> Self {
        Self {
            q,
            order: coefficients.len(),
            coefficients,
            residual: 0.0,
            condition_estimate: f64::NAN,
            initial_value: 0.0,
            conditioning_warning: false,
        }
    }

    pub fn eval_transformed(&self, v: f64) -> f64 {
        eval_transformed(self, v)
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_solution(self, x)
    }

    /// Solution of the original, possibly non-homogeneous, problem.
    pub fn eval_original(&self, x: f64) -> f64 {
        self.initial_value + eval_solution(self, x)
    }
}

/// `ū_N(v) = Σ a_i G_i(v)`.
pub fn eval_transformed(sol: &SpectralSolution, v: f64) -> f64 {
    let mut t = Vec::with_capacity(sol.coefficients.len());
    test_values(sol.coefficients.len(), v, &mut t);
    let s: f64 = sol.coefficients.iter().zip(&t).map(|(a, t)| a * t).sum();
    2.0 * v * s
}

/// `u_N(x) = ū_N(x^q)`.
pub fn eval_solution(sol: &SpectralSolution, x: f64) -> f64 {
    eval_transformed(sol, x.powf(sol.q))
}

/// Solve and also return the assembled system.
pub fn solve_with_system(problem: &Problem, n: usize) -> Result<(SpectralSolution, GalerkinSystem)> {
    if n == 0 {
        return Err(invalid("Galerkin order must be at least 1"));
    }
    let reduced = reduce_nonhomogeneous(problem);
    let tp = transform_problem(&reduced)?;
    let psi = psi_table(n, problem.q())?;
    let sys = assemble(&tp, n, &psi)?;
    let (coefficients, diag) = lu_solve(&sys)?;
    let sol = SpectralSolution {
        q: problem.q(),
        order: n,
        coefficients,
        residual: diag.residual,
        condition_estimate: diag.condition_estimate,
        initial_value: problem.initial_value() + problem.absorbed_initial_value(),
        conditioning_warning: psi.ill_conditioned(),
    };
    Ok((sol, sys))
}

/// Discrete Galerkin solution of order N.
pub fn solve(problem: &Problem, n: usize) -> Result<SpectralSolution> {
    solve_with_system(problem, n).map(|(sol, _)| sol)
}
