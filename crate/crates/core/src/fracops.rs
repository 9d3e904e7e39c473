//! Closed-form images of the trial functions under the transformed Caputo
//! operator
//!
//! ```text
//! M^q u(v) = 1/Γ(1-q) ∫_0^v (v^{1/q} - w^{1/q})^{-q} u'(w) dw.
//! ```
//!
//! A monomial maps to a monomial one degree lower:
//! `M^q v^{k+1} = μ_{k,q} v^k` with `μ_{k,q} = Γ(q(k+1)+1) / Γ(qk+1)`,
//! so `Ψ_j = M^q G_j` is a polynomial of degree j-1 whose coefficients are
//! the trial-function coefficients scaled by μ. Products that would overflow
//! are formed in log space, which keeps the table finite for j in the
//! hundreds.

use crate::basis::{trial_coeff, trial_coeff_log, MonomialCoeffs, MONOMIAL_WARN_THRESHOLD};
use crate::error::{invalid, Result};
use crate::specialfn::{gamma, log_gamma, GAMMA_MAX_ARG};

fn check_order(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("fractional order must lie in (0, 1), got {q}")))
    }
}

fn log_mu(k: usize, q: f64) -> f64 {
    let qk = q * k as f64;
    log_gamma(qk + q + 1.0).expect("positive argument") - log_gamma(qk + 1.0).expect("positive argument")
}

fn mu(k: usize, q: f64) -> f64 {
    let qk = q * k as f64;
    if qk + q + 1.0 < GAMMA_MAX_ARG {
        gamma(qk + q + 1.0).expect("finite argument") / gamma(qk + 1.0).expect("finite argument")
    } else {
        log_mu(k, q).exp()
    }
}

/// `μ_{k,q} = Γ(qk + q + 1) / Γ(qk + 1)`, the factor with
/// `M^q v^{k+1} = μ_{k,q} v^k`.
pub fn caputo_monomial_image(k: usize, q: f64) -> Result<f64> {
    check_order(q)?;
    Ok(mu(k, q))
}

/// Monomial coefficients of `Ψ_{j,q}` for j = 1..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTable {
    q: f64,
    rows: Vec<MonomialCoeffs>,
}

impl PsiTable {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Row j (1-based): coefficients of v^0 .. v^{j-1}.
    pub fn row(&self, j: usize) -> Option<&MonomialCoeffs> {
        j.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    /// True if any row carries the monomial conditioning warning.
    pub fn ill_conditioned(&self) -> bool {
        self.rows.iter().any(|r| r.ill_conditioned)
    }

    /// `Ψ_{j,q}(v)` by compensated Horner evaluation.
    pub fn eval(&self, j: usize, v: f64) -> Result<f64> {
        let row = self
            .row(j)
            .ok_or_else(|| invalid(format!("psi index {j} outside 1..={}", self.size())))?;
        Ok(compensated_horner(&row.coeffs, v))
    }
}

/// Build the table of `Ψ_{j,q}` for j = 1..=n.
pub fn psi_table(n: usize, q: f64) -> Result<PsiTable> {
    check_order(q)?;
    if n == 0 {
        return Err(invalid("psi table needs N >= 1"));
    }
    let mus: Vec<f64> = (0..n).map(|k| mu(k, q)).collect();
    let log_mus: Vec<f64> = (0..n).map(|k| log_mu(k, q)).collect();
    let warn_log = MONOMIAL_WARN_THRESHOLD.ln();
    let rows = (1..=n)
        .map(|j| {
            let coeffs = (0..j)
                .map(|k| {
                    let direct = trial_coeff(j, k) * mus[k];
                    if direct.is_finite() {
                        direct
                    } else {
                        let (sign, log_g) = trial_coeff_log(j, k);
                        sign * (log_g + log_mus[k]).exp()
                    }
                })
                .collect();
            // the warning follows the G_j expansion this row was built from
            let mut row = MonomialCoeffs::new(coeffs);
            row.ill_conditioned = (0..j).any(|k| trial_coeff_log(j, k).1 > warn_log);
            row
        })
        .collect();
    Ok(PsiTable { q, rows })
}

/// Convenience wrapper matching the table method.
pub fn psi_eval(table: &PsiTable, j: usize, v: f64) -> Result<f64> {
    table.eval(j, v)
}

/// Horner's scheme with error-free transformations (TwoProduct via FMA,
/// TwoSum) accumulating the rounding errors in a correction polynomial.
pub(crate) fn compensated_horner(coeffs: &[f64], v: f64) -> f64 {
    let mut s = match coeffs.last() {
        Some(&c) => c,
        None => return 0.0,
    };
    let mut err: f64 = 0.0;
    for &c in coeffs.iter().rev().skip(1) {
        let p = s * v;
        let pi = s.mul_add(v, -p);
        let t = p + c;
        let z = t - p;
        let sigma = (p - (t - z)) + (c - z);
        s = t;
        err = err.mul_add(v, pi + sigma);
    }
    s + err
}
