//! Shifted Jacobi polynomials on [0, 1] and the generalized Jacobi
//! trial/test functions of the Galerkin scheme.
//!
//! The trial functions are `G_i(v) = 2v J_{i-1}^{0,1}(v)` (index pair
//! (0,-1)); they vanish at v = 0, which builds the homogeneous initial
//! condition into the approximation space. Multiplying by the (0,-1)
//! weight turns them into the test functions `J_{i-1}^{0,1}(v)` under the
//! plain Legendre inner product.
//!
//! Only these two index pairs are implemented; the other generalized
//! index classes are not needed by the scheme.

use crate::error::{invalid, Result};
use crate::specialfn::log_gamma;

/// Largest coefficient magnitude before a monomial expansion is flagged as
/// ill-conditioned.
pub const MONOMIAL_WARN_THRESHOLD: f64 = 1e15;

/// Polynomial `Σ c_k v^k` stored by ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialCoeffs {
    pub coeffs: Vec<f64>,
    /// Set when the largest |coefficient| exceeds
    /// [`MONOMIAL_WARN_THRESHOLD`]; cancellation then limits the accuracy
    /// of evaluating this form in double precision.
    pub ill_conditioned: bool,
}

impl MonomialCoeffs {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        let ill_conditioned = coeffs.iter().any(|c| c.abs() > MONOMIAL_WARN_THRESHOLD);
        Self {
            coeffs,
            ill_conditioned,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Plain Horner evaluation.
    pub fn horner(&self, v: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * v + c)
    }
}

/// Shifted Jacobi polynomial `J_n^{α,β}(v) = P_n^{(α,β)}(2v - 1)` by the
/// three-term recurrence.
pub fn jacobi_eval(n: usize, alpha: f64, beta: f64, v: f64) -> Result<f64> {
    if alpha.is_nan() || beta.is_nan() || alpha <= -1.0 || beta <= -1.0 {
        return Err(invalid(format!(
            "Jacobi parameters must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(jacobi_unchecked(n, alpha, beta, v))
}

pub(crate) fn jacobi_unchecked(n: usize, alpha: f64, beta: f64, v: f64) -> f64 {
    let s = 2.0 * v - 1.0;
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = (alpha + 1.0) + 0.5 * (ab + 2.0) * (s - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * s + alpha * alpha - beta * beta);
        let a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let p_next = (a2 * p - a3 * p_prev) / a1;
        p_prev = p;
        p = p_next;
    }
    p
}

fn check_index(i: usize) -> Result<()> {
    if i == 0 {
        Err(invalid("basis index starts at 1"))
    } else {
        Ok(())
    }
}

/// Trial function `G_i^{0,-1}(v) = 2v J_{i-1}^{0,1}(v)`, i >= 1.
pub fn gjp_trial_eval(i: usize, v: f64) -> Result<f64> {
    check_index(i)?;
    Ok(trial(i, v))
}

/// Test function `G_{i-1}^{0,1}(v) = J_{i-1}^{0,1}(v)`, i >= 1.
pub fn gjp_test_eval(i: usize, v: f64) -> Result<f64> {
    check_index(i)?;
    Ok(test(i, v))
}

#[inline]
pub(crate) fn trial(i: usize, v: f64) -> f64 {
    2.0 * v * test(i, v)
}

#[inline]
pub(crate) fn test(i: usize, v: f64) -> f64 {
    jacobi_unchecked(i - 1, 0.0, 1.0, v)
}

/// Values of `J_0^{0,1}(v), ..., J_{count-1}^{0,1}(v)` in one pass of the
/// recurrence.
pub(crate) fn test_values(count: usize, v: f64, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    let s = 2.0 * v - 1.0;
    out.push(1.0);
    if count == 1 {
        return;
    }
    // α = 0, β = 1
    out.push(1.0 + 1.5 * (s - 1.0));
    for k in 2..count {
        let k = k as f64;
        let c = 2.0 * k + 1.0;
        let a1 = 2.0 * k * (k + 1.0) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * s - 1.0);
        let a3 = 2.0 * (k - 1.0) * k * c;
        let n = out.len();
        out.push((a2 * out[n - 1] - a3 * out[n - 2]) / a1);
    }
}

/// Signed log-magnitude of the coefficient of `v^(k+1)` in `G_i`:
/// `2(-1)^{i-1-k} (i+k)! / ((k+1)! (i-1-k)! k!)`.
pub(crate) fn trial_coeff_log(i: usize, k: usize) -> (f64, f64) {
    debug_assert!(k < i);
    let lg = |m: usize| log_gamma(m as f64 + 1.0).expect("factorial of a non-negative integer");
    let log_mag = std::f64::consts::LN_2 + lg(i + k) - lg(k + 1) - lg(i - 1 - k) - lg(k);
    let sign = if (i - 1 - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    (sign, log_mag)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, m| acc * (n - k + m) as f64 / m as f64)
}

/// Coefficient of v^{k+1} in `G_i^{0,-1}`, i.e. `2 (-1)^{i-1-k} C(i+k, k) C(i, k+1)`.
///
/// The binomial products are accurate to a few ulps; log space is used only
/// once they overflow.
pub(crate) fn trial_coeff(i: usize, k: usize) -> f64 {
    let (sign, log_mag) = trial_coeff_log(i, k);
    let direct = 2.0 * binomial(i + k, k) * binomial(i, k + 1);
    if direct.is_finite() {
        sign * direct
    } else {
        sign * log_mag.exp()
    }
}

/// Monomial expansion of `G_i^{0,-1}`; coefficient index = power of v.
///
/// Factorial ratios fall back to log space when they overflow. Prefer [`gjp_trial_eval`] for
/// pointwise values: this form is exponentially ill-conditioned in i.
pub fn gjp_trial_monomials(i: usize) -> Result<MonomialCoeffs> {
    check_index(i)?;
    let mut coeffs = vec![0.0; i + 1];
    for k in 0..i {
        coeffs[k + 1] = trial_coeff(i, k);
    }
    Ok(MonomialCoeffs::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::legendre_gauss;
    use rand::{Rng, SeedableRng};

    #[test]
    fn jacobi_examples() {
        for &(a, b) in &[(0.0, 1.0), (-0.5, 2.0), (3.0, -0.9)] {
            for &v in &[0.0, 0.3, 1.0] {
                assert_eq!(jacobi_eval(0, a, b, v).unwrap(), 1.0);
            }
        }
        assert!((jacobi_eval(1, 0.0, 1.0, 0.5).unwrap() + 0.5).abs() < 1e-15);
        assert!((jacobi_eval(3, 0.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_rejects_bad_parameters() {
        assert!(jacobi_eval(2, -1.0, 0.0, 0.5).is_err());
        assert!(jacobi_eval(2, 0.0, -1.5, 0.5).is_err());
        assert!(jacobi_eval(2, f64::NAN, 0.0, 0.5).is_err());
    }

    #[test]
    fn jacobi_endpoint_values() {
        // J_n^{α,β}(1) = Γ(n+α+1) / (n! Γ(α+1))
        for n in 0..12 {
            for &alpha in &[0.0, 0.5, 2.0] {
                let expected = (log_gamma(n as f64 + alpha + 1.0).unwrap()
                    - log_gamma(n as f64 + 1.0).unwrap()
                    - log_gamma(alpha + 1.0).unwrap())
                .exp();
                let got = jacobi_eval(n, alpha, 0.7, 1.0).unwrap();
                assert!((got - expected).abs() < 1e-12 * expected, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn trial_examples() {
        assert_eq!(gjp_trial_eval(1, 0.5).unwrap(), 1.0);
        assert!((gjp_trial_eval(2, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(gjp_trial_eval(7, 0.0).unwrap(), 0.0);
        assert!(gjp_trial_eval(0, 0.5).is_err());
    }

    #[test]
    fn test_examples() {
        for &v in &[0.0, 0.4, 1.0] {
            assert_eq!(gjp_test_eval(1, v).unwrap(), 1.0);
        }
        assert!((gjp_test_eval(2, 0.5).unwrap() + 0.5).abs() < 1e-15);
        assert!(gjp_test_eval(2, 2.0 / 3.0).unwrap().abs() < 1e-15);
        assert!(gjp_test_eval(0, 0.5).is_err());
    }

    #[test]
    fn monomial_examples() {
        let close = |got: &[f64], want: &[f64]| {
            assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() <= 1e-14 * w.abs().max(1.0), "{got:?} vs {want:?}");
            }
        };
        close(&gjp_trial_monomials(1).unwrap().coeffs, &[0.0, 2.0]);
        close(&gjp_trial_monomials(2).unwrap().coeffs, &[0.0, -4.0, 6.0]);
        close(&gjp_trial_monomials(3).unwrap().coeffs, &[0.0, 6.0, -24.0, 20.0]);
        assert!(gjp_trial_monomials(0).is_err());
    }

    #[test]
    fn monomials_vanish_at_origin_and_have_full_degree() {
        for i in 1..=40 {
            let m = gjp_trial_monomials(i).unwrap();
            assert_eq!(m.coeffs[0], 0.0);
            assert_eq!(m.degree(), i);
        }
    }

    #[test]
    fn conditioning_flag() {
        assert!(!gjp_trial_monomials(10).unwrap().ill_conditioned);
        assert!(gjp_trial_monomials(40).unwrap().ill_conditioned);
    }

    #[test]
    fn recurrence_matches_monomials() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for i in 1..=20 {
            let m = gjp_trial_monomials(i).unwrap();
            for _ in 0..50 {
                let v: f64 = rng.gen_range(0.0..1.0);
                let value = gjp_trial_eval(i, v).unwrap();
                let diff = (value - m.horner(v)).abs();
                // beyond i ~ 10 the rounded coefficients alone cost more than
                // 1e-10, so allow the usual Horner bound there
                let abs_sum: f64 = m.coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c.abs());
                let bound = 4.0 * (i + 1) as f64 * f64::EPSILON * abs_sum;
                let tol = (1e-10 * value.abs().max(1.0)).max(bound);
                if i <= 9 {
                    assert!(diff <= 1e-10 * value.abs().max(1.0), "i={i} v={v} diff={diff}");
                }
                assert!(diff <= tol, "i={i} v={v} diff={diff} tol={tol}");
            }
        }
    }

    #[test]
    fn weighted_orthogonality() {
        let rule = legendre_gauss(64).unwrap();
        for m in 0..=10 {
            for n in 0..=10 {
                if m == n {
                    continue;
                }
                let ip = rule.integrate(|v| {
                    jacobi_eval(m, 0.0, 1.0, v).unwrap() * jacobi_eval(n, 0.0, 1.0, v).unwrap() * 2.0 * v
                });
                assert!(ip.abs() < 1e-12, "m={m} n={n} ip={ip}");
            }
        }
    }

    #[test]
    fn trial_test_duality_and_endpoint() {
        for i in 1..=64 {
            assert_eq!(gjp_trial_eval(i, 0.0).unwrap(), 0.0);
            for &v in &[0.1, 0.37, 0.9] {
                assert_eq!(gjp_trial_eval(i, v).unwrap(), 2.0 * v * gjp_test_eval(i, v).unwrap());
            }
        }
    }

    #[test]
    fn batched_test_values_match_pointwise() {
        let mut buf = Vec::new();
        for &v in &[0.0, 0.21, 0.5, 0.99] {
            test_values(30, v, &mut buf);
            for i in 1..=30 {
                assert_eq!(buf[i - 1], gjp_test_eval(i, v).unwrap());
            }
        }
    }
}
