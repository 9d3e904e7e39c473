//! Gauss-Legendre rules shifted to [0, 1] and the discrete inner product
//! built on them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{invalid, Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 50;

/// An n-point Gauss-Legendre rule on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ w_k f(v_k)` for an infallible integrand.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(v, w)| w * f(v)).sum()
    }

    /// Like [`integrate`](Self::integrate), stopping at the first
    /// evaluation error.
    pub fn try_integrate<E>(&self, f: impl Fn(f64) -> Result<f64, E>) -> Result<f64, E> {
        let mut acc = 0.0;
        for (v, w) in self.iter() {
            acc += w * f(v)?;
        }
        Ok(acc)
    }

    /// Discrete (0,0) inner product `(f, g)_N = Σ w_k f(v_k) g(v_k)`.
    pub fn inner(&self, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> f64 {
        self.integrate(|v| f(v) * g(v))
    }

    pub fn try_inner<E>(&self, f: impl Fn(f64) -> Result<f64, E>, g: impl Fn(f64) -> Result<f64, E>) -> Result<f64, E> {
        self.try_integrate(|v| Ok(f(v)? * g(v)?))
    }
}

/// Legendre polynomial P_n and its derivative at s in (-1, 1).
fn legendre_with_derivative(n: usize, s: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = s;
    for k in 2..=n {
        let k = k as f64;
        let p_next = ((2.0 * k - 1.0) * s * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (s * p - p_prev) / (s * s - 1.0);
    (p, dp)
}

/// Build the n-point Gauss-Legendre rule on [0, 1].
///
/// Roots of P_n are found by Newton iteration from the asymptotic guesses
/// `cos(π(4i-1)/(4n+2))`, mapped to [0, 1], and symmetrized by averaging
/// each mirror pair.
pub fn legendre_gauss(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(invalid("a quadrature rule needs at least one point"));
    }
    if n == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.5],
            weights: vec![1.0],
        });
    }

    // roots on [-1, 1] in decreasing order; only the upper half is searched
    let half = n.div_ceil(2);
    let mut roots = Vec::with_capacity(half);
    let mut root_weights = Vec::with_capacity(half);
    for i in 1..=half {
        let mut s = (PI * (4 * i - 1) as f64 / (4 * n + 2) as f64).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, s);
            let step = p / dp;
            s -= step;
            if step.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure { n, root: i });
        }
        let (_, dp) = legendre_with_derivative(n, s);
        roots.push(s);
        root_weights.push(2.0 / ((1.0 - s * s) * dp * dp));
    }

    // assemble ascending on [0, 1]; i-th smallest node is the mirror of the
    // i-th largest root
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for (i, (&s, &w)) in roots.iter().zip(&root_weights).enumerate() {
        let hi = 0.5 * (1.0 + s);
        let lo = 0.5 * (1.0 - s);
        nodes[n - 1 - i] = hi;
        nodes[i] = lo;
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    // averaging mirror pairs makes node[i] + node[n-1-i] = 1 hold exactly
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let lo = 0.5 * (nodes[i] + (1.0 - nodes[j]));
        nodes[i] = lo;
        nodes[j] = 1.0 - lo;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    Ok(QuadratureRule { nodes, weights })
}

type RuleCache = RwLock<HashMap<usize, Arc<QuadratureRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Process-wide cached version of [`legendre_gauss`].
pub fn cached_rule(n: usize) -> Result<Arc<QuadratureRule>> {
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(legendre_gauss(n)?);
    let mut guard = cache().write().expect("rule cache poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert(rule)))
}
