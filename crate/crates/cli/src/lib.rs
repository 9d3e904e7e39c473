//! Command-line workflows for the fide solver: solving a problem file,
//! convergence sweeps, quadrature inspection and problem validation.

pub mod problem_file;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fide_core::analysis::{convergence_sweep, SweepOptions, DEFAULT_ERROR_QUAD_POINTS};
use fide_core::fracops::psi_table;
use fide_core::galerkin::{assemble, reduce_nonhomogeneous, solve, transform_problem, Problem};
use fide_core::quadrature::legendre_gauss;
use serde::Serialize;

pub use problem_file::{load_problem, LoadError, ProblemFile};

/// Overrides the number of Gauss points used for L2 error norms.
pub const ERROR_QUAD_ENV: &str = "FIDE_ERROR_QUAD_POINTS";

#[derive(Debug, Parser)]
#[command(
    name = "fide",
    version,
    about = "Spectral Galerkin solver for fractional integro-differential equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem at one order and write the coefficients.
    Solve(SolveArgs),
    /// Sweep over orders and tabulate errors against the exact solution.
    Converge(ConvergeArgs),
    /// Print the nodes and weights of a Gauss-Legendre rule on [0, 1].
    Rule(RuleArgs),
    /// Validate a problem file and smoke-test its data.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub order: u64,
    /// Solution JSON destination (standard output if omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also sample u_N at this many equispaced points in (0, 1].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// `a:b:s` (inclusive) or a comma-separated list.
    #[arg(long, value_parser = parse_orders)]
    pub orders: Orders,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Two-column `N log10_l2_error` file.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub problem: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orders(pub Vec<usize>);

/// Parse `a:b:s` or `n1,n2,...`; every order must be at least 1.
pub fn parse_orders(spec: &str) -> Result<Orders, String> {
    let num = |s: &str| -> Result<usize, String> {
        let n: usize = s
            .trim()
            .parse()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))?;
        if n == 0 {
            return Err("orders must be at least 1".into());
        }
        Ok(n)
    };
    let orders = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [a, b, s] = parts[..] else {
            return Err(format!("range `{spec}` must have the form start:stop:step"));
        };
        let (a, b, s) = (num(a)?, num(b)?, num(s)?);
        if a > b {
            return Err(format!("range `{spec}` is empty"));
        }
        (a..=b).step_by(s).collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if orders.is_empty() {
        return Err("no orders given".into());
    }
    Ok(Orders(orders))
}

/// Error-norm size from the environment, falling back to the default with a
/// warning when the value is not a positive integer.
pub fn error_quad_points(value: Option<&str>, warn: &mut dyn Write) -> usize {
    match value {
        None => DEFAULT_ERROR_QUAD_POINTS,
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 2 => n,
            _ => {
                let _ = writeln!(
                    warn,
                    "warning: ignoring {ERROR_QUAD_ENV}={v:?} (expected an integer >= 2), using {DEFAULT_ERROR_QUAD_POINTS}"
                );
                DEFAULT_ERROR_QUAD_POINTS
            }
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionDocument {
    pub name: String,
    pub q: f64,
    pub lambda: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub condition_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load(path: &Path) -> Result<Problem> {
    load_problem(path).with_context(|| format!("loading {}", path.display()))
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let problem = load(&args.problem)?;
    let n = args.order as usize;
    let sol = solve(&problem, n).with_context(|| format!("solving `{}` at N = {n}", problem.name()))?;
    let grid = args.grid.map(|m| {
        let x: Vec<f64> = (1..=m).map(|k| k as f64 / m as f64).collect();
        let u = x.iter().map(|&x| sol.eval_original(x)).collect();
        Grid { x, u }
    });
    let doc = SolutionDocument {
        name: problem.name().to_string(),
        q: problem.q(),
        lambda: problem.lambda(),
        order: n,
        coefficients: sol.coefficients.clone(),
        residual: sol.residual,
        condition_estimate: sol.condition_estimate,
        grid,
    };
    let json = serde_json::to_string_pretty(&doc)? + "\n";
    match &args.output {
        Some(path) => write_file(path, &json)?,
        None => out.write_all(json.as_bytes())?,
    }
    writeln!(
        out,
        "N={n} residual={:.3e} cond={:.3e}",
        sol.residual, sol.condition_estimate
    )?;
    if sol.conditioning_warning {
        writeln!(
            out,
            "warning: monomial form of the operator images is ill-conditioned at this order"
        )?;
    }
    Ok(())
}

pub fn cmd_converge(args: &ConvergeArgs, quad_points: usize, out: &mut dyn Write) -> Result<()> {
    let problem = load(&args.problem)?;
    let opts = SweepOptions {
        error_quad_points: quad_points,
        ..SweepOptions::default()
    };
    let report = convergence_sweep(&problem, &args.orders.0, opts)?;
    out.write_all(report.to_table().as_bytes())?;
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    if let Some(path) = &args.json {
        write_file(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    if let Some(path) = &args.plot {
        write_file(path, &report.to_plot_data())?;
    }
    Ok(())
}

pub fn cmd_rule(args: &RuleArgs, out: &mut dyn Write) -> Result<()> {
    let rule = legendre_gauss(args.points as usize)?;
    for (x, w) in rule.iter() {
        writeln!(out, "{x:.17e} {w:.17e}")?;
    }
    Ok(())
}

const CHECK_POINTS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Run the data checks; returns whether every line passed.
pub fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> Result<bool> {
    let mut ok = true;
    let mut line = |out: &mut dyn Write, pass: bool, what: &str| -> Result<()> {
        ok &= pass;
        writeln!(out, "{} {what}", if pass { "PASS" } else { "FAIL" })?;
        Ok(())
    };

    let problem = match load_problem(&args.problem) {
        Ok(p) => {
            line(out, true, "problem file")?;
            p
        }
        Err(e) => {
            line(out, false, &format!("problem file: {e}"))?;
            return Ok(false);
        }
    };

    let reduced = reduce_nonhomogeneous(&problem);
    let tp = transform_problem(&reduced)?;
    let mut bad = String::new();
    for &v in &CHECK_POINTS {
        for (label, value) in [("p̄", tp.pbar(v)), ("f̄", tp.fbar(v)), ("K̃", tp.ktilde(v, v / 2.0))] {
            match value {
                Ok(y) if y.is_finite() => {}
                Ok(y) => {
                    let _ = write!(bad, " {label}({v}) = {y};");
                }
                Err(e) => {
                    let _ = write!(bad, " {label}({v}): {e};");
                }
            }
        }
    }
    line(out, bad.is_empty(), &format!("transformed data at sample points{bad}"))?;

    let assembled = psi_table(2, problem.q()).and_then(|psi| assemble(&tp, 2, &psi));
    match assembled {
        Ok(_) => line(out, true, "assembly of the N = 2 system")?,
        Err(e) => line(out, false, &format!("assembly of the N = 2 system: {e}"))?,
    }

    if problem.exact().is_some() {
        let mut bad = String::new();
        for &x in &CHECK_POINTS {
            match problem.eval_exact(x) {
                Ok(Some(y)) if y.is_finite() => {}
                Ok(y) => {
                    let _ = write!(bad, " u({x}) = {y:?};");
                }
                Err(e) => {
                    let _ = write!(bad, " u({x}): {e};");
                }
            }
        }
        line(out, bad.is_empty(), &format!("exact solution at sample points{bad}"))?;
    }
    Ok(ok)
}

/// Dispatch a parsed command line. Returns the process exit status for
/// commands that complete; errors map to status 1 in `main`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, out).map(|_| 0),
        Command::Converge(a) => {
            let points = error_quad_points(std::env::var(ERROR_QUAD_ENV).ok().as_deref(), err);
            cmd_converge(a, points, out).map(|_| 0)
        }
        Command::Rule(a) => cmd_rule(a, out).map(|_| 0),
        Command::Check(a) => cmd_check(a, out).map(|ok| if ok { 0 } else { 1 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_specs() {
        assert_eq!(parse_orders("2:16:2").unwrap().0, vec![2, 4, 6, 8, 10, 12, 14, 16]);
        assert_eq!(parse_orders("2,4,8").unwrap().0, vec![2, 4, 8]);
        assert_eq!(parse_orders("3:3:1").unwrap().0, vec![3]);
        assert_eq!(parse_orders("1:6:4").unwrap().0, vec![1, 5]);
        assert!(parse_orders("16:2:2").unwrap_err().contains("empty"));
        assert!(parse_orders("2:8:0").is_err());
        assert!(parse_orders("2:8").is_err());
        assert!(parse_orders("0,2").is_err());
        assert!(parse_orders("2,x").is_err());
        assert!(parse_orders("").is_err());
    }

    #[test]
    fn env_override_of_error_rule() {
        let mut warn = Vec::new();
        assert_eq!(error_quad_points(None, &mut warn), 200);
        assert_eq!(error_quad_points(Some("400"), &mut warn), 400);
        assert!(warn.is_empty());
        assert_eq!(error_quad_points(Some("lots"), &mut warn), 200);
        assert_eq!(error_quad_points(Some("0"), &mut warn), 200);
        let msg = String::from_utf8(warn).unwrap();
        assert_eq!(msg.lines().count(), 2);
        assert!(msg.contains(ERROR_QUAD_ENV));
    }

    #[test]
    fn rule_lines() {
        let mut out = Vec::new();
        cmd_rule(&RuleArgs { points: 2 }, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 2);
        let off = 0.5 / 3f64.sqrt();
        assert!((rows[0][0] - (0.5 - off)).abs() < 1e-16);
        assert!((rows[1][0] - (0.5 + off)).abs() < 1e-16);
        assert!(rows.iter().all(|r| (r[1] - 0.5).abs() < 1e-15));
    }
}
