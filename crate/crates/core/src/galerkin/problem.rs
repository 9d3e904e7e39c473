use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::expr::{parse, BinOp, Expr};
use crate::quadrature::{cached_rule, QuadratureRule};

/// Points of the fixed rule used for `∫_0^x K(x,t) dt` when an initial
/// value is folded into the forcing.
pub const REDUCTION_RULE_POINTS: usize = 64;

pub const VARS_X: &[&str] = &["x"];
pub const VARS_XT: &[&str] = &["x", "t"];

/// A linear fractional integro-differential equation
///
/// ```text
/// D^q u(x) = p(x) u(x) + f(x) + λ ∫_0^x K(x,t) u(t) dt,   u(0) = d,
/// ```
///
/// with Caputo derivative of order 0 < q < 1 on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    name: String,
    q: f64,
    lambda: f64,
    p: Expr,
    f: Expr,
    kernel: Expr,
    d: f64,
    exact: Option<Expr>,
    /// Initial value already absorbed into the forcing term.
    absorbed: f64,
}

fn check_vars(field: &str, e: &Expr, allowed: &[&str]) -> Result<()> {
    match e.free_vars().into_iter().find(|v| !allowed.contains(&v.as_str())) {
        Some(v) => Err(invalid(format!(
            "{field} uses variable `{v}`, allowed: {}",
            allowed.join(", ")
        ))),
        None => Ok(()),
    }
}

impl Problem {
    pub fn new(name: impl Into<String>, q: f64, lambda: f64, p: Expr, f: Expr, kernel: Expr) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(invalid(format!("q must lie in the open interval (0, 1), got {q}")));
        }
        if !lambda.is_finite() {
            return Err(invalid(format!("lambda must be finite, got {lambda}")));
        }
        check_vars("p", &p, VARS_X)?;
        check_vars("f", &f, VARS_X)?;
        check_vars("kernel", &kernel, VARS_XT)?;
        Ok(Self {
            name: name.into(),
            q,
            lambda,
            p,
            f,
            kernel,
            d: 0.0,
            exact: None,
            absorbed: 0.0,
        })
    }

    /// Parse the three data expressions and build a problem.
    pub fn from_sources(name: impl Into<String>, q: f64, lambda: f64, p: &str, f: &str, kernel: &str) -> Result<Self> {
        Self::new(
            name,
            q,
            lambda,
            parse(p, VARS_X)?,
            parse(f, VARS_X)?,
            parse(kernel, VARS_XT)?,
        )
    }

    pub fn with_initial_value(mut self, d: f64) -> Result<Self> {
        if !d.is_finite() {
            return Err(invalid(format!("initial value must be finite, got {d}")));
        }
        self.d = d;
        Ok(self)
    }

    pub fn with_exact(mut self, exact: Expr) -> Result<Self> {
        check_vars("exact", &exact, VARS_X)?;
        self.exact = Some(exact);
        Ok(self)
    }

    pub fn with_exact_source(self, exact: &str) -> Result<Self> {
        let e = parse(exact, VARS_X)?;
        self.with_exact(e)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn p(&self) -> &Expr {
        &self.p
    }
    pub fn f(&self) -> &Expr {
        &self.f
    }
    pub fn kernel(&self) -> &Expr {
        &self.kernel
    }
    pub fn initial_value(&self) -> f64 {
        self.d
    }
    pub fn exact(&self) -> Option<&Expr> {
        self.exact.as_ref()
    }

    /// Initial value removed by [`reduce_nonhomogeneous`]; add it back to
    /// recover the solution of the original problem.
    pub fn absorbed_initial_value(&self) -> f64 {
        self.absorbed
    }

    pub fn eval_p(&self, x: f64) -> Result<f64> {
        Ok(self.p.eval(&[("x", x)])?)
    }

    pub fn eval_kernel(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.kernel.eval(&[("x", x), ("t", t)])?)
    }

    pub fn eval_exact(&self, x: f64) -> Result<Option<f64>> {
        self.exact
            .as_ref()
            .map(|e| e.eval(&[("x", x)]).map_err(Error::from))
            .transpose()
    }

    /// Forcing term, including any initial value folded in by the
    /// reduction: `f(x) + d (p(x) + λ ∫_0^x K(x,t) dt)`.
    pub fn eval_forcing(&self, x: f64) -> Result<f64> {
        let f = self.f.eval(&[("x", x)])?;
        if self.absorbed == 0.0 {
            return Ok(f);
        }
        let rule = cached_rule(REDUCTION_RULE_POINTS)?;
        let kernel_integral = if self.lambda == 0.0 {
            0.0
        } else {
            x * rule.try_integrate(|theta| self.eval_kernel(x, x * theta))?
        };
        Ok(f + self.absorbed * (self.eval_p(x)? + self.lambda * kernel_integral))
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: D^{} u = ({}) u + ({}) + {} ∫ ({}) u dt, u(0) = {}",
            self.name, self.q, self.p, self.f, self.lambda, self.kernel, self.d
        )
    }
}

/// Shift `u = ũ + d` so that the initial condition becomes homogeneous.
pub fn reduce_nonhomogeneous(problem: &Problem) -> Problem {
    let mut out = problem.clone();
    if problem.d == 0.0 {
        return out;
    }
    out.absorbed += problem.d;
    out.d = 0.0;
    out.exact = problem
        .exact
        .as_ref()
        .map(|e| Expr::Binary(BinOp::Sub, Box::new(e.clone()), Box::new(Expr::Constant(problem.d))));
    out
}

type ScalarFn<'a> = Box<dyn Fn(f64) -> Result<f64> + Send + Sync + 'a>;
type KernelFn<'a> = Box<dyn Fn(f64, f64) -> Result<f64> + Send + Sync + 'a>;

/// The problem after the substitution `x = v^{1/q}`:
///
/// ```text
/// M^q ū(v) = p̄(v) ū(v) + f̄(v) + λ ∫_0^v K̃(v,w) ū(w) dw
/// p̄(v) = p(v^{1/q}),  f̄(v) = f(v^{1/q}),
/// K̃(v,w) = (w^{1/q - 1} / q) K(v^{1/q}, w^{1/q}).
/// ```
///
/// The data are only ever evaluated at interior quadrature points, so
/// removable singularities at the origin need no special handling.
pub struct TransformedProblem<'a> {
    q: f64,
    lambda: f64,
    pbar: ScalarFn<'a>,
    fbar: ScalarFn<'a>,
    ktilde: KernelFn<'a>,
}

impl<'a> TransformedProblem<'a> {
    /// Build transformed data directly from closures in the v variable.
    pub fn from_fns(
        q: f64,
        lambda: f64,
        pbar: impl Fn(f64) -> Result<f64> + Send + Sync + 'a,
        fbar: impl Fn(f64) -> Result<f64> + Send + Sync + 'a,
        ktilde: impl Fn(f64, f64) -> Result<f64> + Send + Sync + 'a,
    ) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(invalid(format!("q must lie in (0, 1), got {q}")));
        }
        Ok(Self {
            q,
            lambda,
            pbar: Box::new(pbar),
            fbar: Box::new(fbar),
            ktilde: Box::new(ktilde),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn pbar(&self, v: f64) -> Result<f64> {
        (self.pbar)(v)
    }
    pub fn fbar(&self, v: f64) -> Result<f64> {
        (self.fbar)(v)
    }
    pub fn ktilde(&self, v: f64, w: f64) -> Result<f64> {
        (self.ktilde)(v, w)
    }
}

impl fmt::Debug for TransformedProblem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformedProblem")
            .field("q", &self.q)
            .field("lambda", &self.lambda)
            .finish_non_exhaustive()
    }
}

/// Apply the regularizing change of variables to a problem with u(0) = 0.
pub fn transform_problem(problem: &Problem) -> Result<TransformedProblem<'_>> {
    if problem.d != 0.0 {
        return Err(Error::Precondition(format!(
            "transform requires u(0) = 0, problem `{}` has u(0) = {}; reduce it first",
            problem.name, problem.d
        )));
    }
    let q = problem.q;
    let inv_q = 1.0 / q;
    TransformedProblem::from_fns(
        q,
        problem.lambda,
        move |v| problem.eval_p(v.powf(inv_q)),
        move |v| problem.eval_forcing(v.powf(inv_q)),
        move |v, w| {
            let jac = w.powf(inv_q - 1.0) / q;
            Ok(jac * problem.eval_kernel(v.powf(inv_q), w.powf(inv_q))?)
        },
    )
}

/// `v ∫_0^1 K̃(v, vθ) G_j(vθ) dθ` by the given rule.
pub fn kernel_action(tp: &TransformedProblem<'_>, rule: &QuadratureRule, j: usize, v: f64) -> Result<f64> {
    if j == 0 {
        return Err(invalid("basis index starts at 1"));
    }
    let s = rule.try_integrate(|theta| {
        let w = v * theta;
        Ok::<_, Error>(tp.ktilde(v, w)? * crate::basis::trial(j, w))
    })?;
    Ok(v * s)
}
