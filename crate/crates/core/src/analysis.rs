//! Error norms against exact solutions and convergence sweeps over the
//! approximation order.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::expr::Expr;
use crate::galerkin::{solve, Problem, SpectralSolution};
use crate::quadrature::cached_rule;

pub const DEFAULT_ERROR_QUAD_POINTS: usize = 200;
pub const DEFAULT_LINF_GRID: usize = 1000;
/// Errors at or below this threshold are excluded from the decay fit.
pub const FIT_ERROR_FLOOR: f64 = 1e-14;
const MACHINE_FLOOR: f64 = 1e-15;

fn eval_x(e: &Expr, x: f64) -> Result<f64> {
    Ok(e.eval(&[("x", x)])?)
}

/// `‖u - u_N‖₂` on [0, 1] in the original variable, by an M-point
/// Gauss-Legendre rule (interior nodes only).
pub fn l2_error(sol: &SpectralSolution, exact: &Expr, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(invalid(format!("error quadrature needs at least 2 points, got {m}")));
    }
    let rule = cached_rule(m)?;
    let sq = rule.try_integrate(|x| {
        let e = eval_x(exact, x)? - sol.eval_original(x);
        Ok::<_, Error>(e * e)
    })?;
    Ok(sq.sqrt())
}

/// `‖u‖₂` by the same rule as [`l2_error`].
pub fn l2_norm(exact: &Expr, m: usize) -> Result<f64> {
    let rule = cached_rule(m)?;
    Ok(rule.try_integrate(|x| eval_x(exact, x).map(|u| u * u))?.sqrt())
}

/// Maximum pointwise error over `grid` equispaced points `k / grid`,
/// k = 1..=grid (x = 0 is excluded).
pub fn linf_error(sol: &SpectralSolution, exact: &Expr, grid: usize) -> Result<f64> {
    if grid < 2 {
        return Err(invalid(format!("error grid needs at least 2 points, got {grid}")));
    }
    let mut worst: f64 = 0.0;
    for k in 1..=grid {
        let x = k as f64 / grid as f64;
        worst = worst.max((eval_x(exact, x)? - sol.eval_original(x)).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub order: usize,
    pub l2_error: f64,
    pub linf_error: f64,
    pub condition_estimate: f64,
    pub elapsed_ms: f64,
    /// The L2 error is within rounding of zero relative to ‖u‖₂.
    pub at_machine_floor: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub rows: Vec<ConvergenceRow>,
    pub error_quad_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub error_quad_points: usize,
    pub linf_grid: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            error_quad_points: DEFAULT_ERROR_QUAD_POINTS,
            linf_grid: DEFAULT_LINF_GRID,
        }
    }
}

/// Solve at each order independently and tabulate the errors.
///
/// Rows are solved in parallel and reported in ascending order of N.
pub fn convergence_sweep(problem: &Problem, orders: &[usize], opts: SweepOptions) -> Result<ConvergenceReport> {
    let exact = problem
        .exact()
        .ok_or_else(|| Error::MissingExact(problem.name().to_string()))?;
    if orders.is_empty() {
        return Err(invalid("convergence sweep needs at least one order"));
    }
    if let Some(&bad) = orders.iter().find(|&&n| n == 0) {
        return Err(invalid(format!("orders must be >= 1, got {bad}")));
    }
    let norm = l2_norm(exact, opts.error_quad_points)?;
    let floor = MACHINE_FLOOR * (1.0 + norm);

    let mut sorted = orders.to_vec();
    sorted.sort_unstable();

    let rows = sorted
        .par_iter()
        .map(|&n| {
            let row = || -> Result<ConvergenceRow> {
                let start = Instant::now();
                let sol = solve(problem, n)?;
                let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
                let l2 = l2_error(&sol, exact, opts.error_quad_points)?;
                Ok(ConvergenceRow {
                    order: n,
                    l2_error: l2,
                    linf_error: linf_error(&sol, exact, opts.linf_grid)?,
                    condition_estimate: sol.condition_estimate,
                    elapsed_ms,
                    at_machine_floor: l2 <= floor,
                })
            };
            row().map_err(|e| Error::SweepRow {
                order: n,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ConvergenceReport {
        problem: problem.name().to_string(),
        rows,
        error_quad_points: opts.error_quad_points,
    })
}

/// Least-squares line through `(N, log10 e_N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Change in log10(error) per unit N.
    pub slope: f64,
    pub intercept: f64,
    /// `None` when the errors are all equal (R² undefined).
    pub r_squared: Option<f64>,
    pub rows_used: usize,
}

impl DecayFit {
    pub fn is_convergent(&self) -> bool {
        self.slope < 0.0 && self.r_squared.is_some()
    }
}

/// Fit the semi-log decay of the L2 errors above [`FIT_ERROR_FLOOR`].
pub fn fitted_decay_rate(report: &ConvergenceReport) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.l2_error > FIT_ERROR_FLOOR)
        .map(|r| (r.order as f64, r.l2_error.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientRows {
            needed: 3,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("decay fit needs at least two distinct orders"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = (syy > 0.0).then(|| (sxy * sxy) / (sxx * syy));
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        rows_used: pts.len(),
    })
}

fn sci16(v: f64) -> String {
    format!("{v:.15e}")
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "N,l2_error,linf_error,cond_estimate,elapsed_ms";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.order,
                sci16(r.l2_error),
                sci16(r.linf_error),
                sci16(r.condition_estimate),
                sci16(r.elapsed_ms)
            );
        }
        out
    }

    /// Two columns, `N log10_l2_error`, for semi-log plotting.
    pub fn to_plot_data(&self) -> String {
        let mut out = String::from("# N log10_l2_error\n");
        for r in &self.rows {
            let _ = writeln!(out, "{} {}", r.order, sci16(r.l2_error.log10()));
        }
        out
    }

    /// Human-readable table with 3 significant digits.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:>4}  {:>10}\n", "N", "l2_error");
        for r in &self.rows {
            let mark = if r.at_machine_floor { "  (machine floor)" } else { "" };
            let _ = writeln!(out, "{:>4}  {:>10}{mark}", r.order, format!("{:.2e}", r.l2_error));
        }
        out
    }
}
