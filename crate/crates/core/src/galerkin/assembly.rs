use crate::basis::test_values;
use crate::error::{invalid, Error, Result};
use crate::fracops::PsiTable;
use crate::galerkin::linalg::{dense_solve, Matrix, SolveDiagnostics};
use crate::galerkin::problem::TransformedProblem;
use crate::quadrature::{cached_rule, QuadratureRule};

/// The N×N discrete Galerkin system `A a = b`.
///
/// With (N+1)-point Gauss nodes `v_m`, weights `δ_m` and test functions
/// `T_i = J_{i-1}^{0,1}`:
///
/// ```text
/// A[i][j] = (Ψ_j, T_i) - (p̄ G_j, T_i) - λ (K_N G_j, T_i)
/// b[i]    = (f̄, T_i)
/// ```
///
/// Rows and columns are stored 0-based: `matrix[(i-1, j-1)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinSystem {
    pub order: usize,
    pub matrix: Matrix,
    pub rhs: Vec<f64>,
    pub q: f64,
    pub lambda: f64,
    pub rule_points: usize,
}

impl GalerkinSystem {
    /// Relative residual of each equation: `|(A a)_i - b_i| / (1 + |b_i|)`.
    pub fn row_residuals(&self, coefficients: &[f64]) -> Vec<f64> {
        self.matrix
            .mul_vec(coefficients)
            .iter()
            .zip(&self.rhs)
            .map(|(ax, b)| (ax - b).abs() / (1.0 + b.abs()))
            .collect()
    }
}

/// Values of the transformed data and basis at the assembly nodes.
struct NodeData {
    test: Vec<Vec<f64>>,
    pbar: Vec<f64>,
    fbar: Vec<f64>,
    /// `kernel[m][j]` = discrete `K_N(G_{j+1})` at node m.
    kernel: Vec<Vec<f64>>,
}

fn sample(tp: &TransformedProblem<'_>, rule: &QuadratureRule, n: usize) -> Result<NodeData> {
    let mut buf = Vec::with_capacity(n);
    let mut test = Vec::with_capacity(rule.points());
    let mut pbar = Vec::with_capacity(rule.points());
    let mut fbar = Vec::with_capacity(rule.points());
    let mut kernel = Vec::with_capacity(rule.points());

    for v in rule.nodes().iter().copied() {
        test_values(n, v, &mut buf);
        test.push(buf.clone());
        pbar.push(tp.pbar(v)?);
        fbar.push(tp.fbar(v)?);

        let mut action = vec![0.0; n];
        if tp.lambda() != 0.0 {
            // v Σ_k δ_k K̃(v, vθ_k) G_j(vθ_k), all j at once
            for (theta, delta) in rule.iter() {
                let w = v * theta;
                let k = tp.ktilde(v, w)?;
                test_values(n, w, &mut buf);
                let scale = delta * k * 2.0 * w;
                for (a, t) in action.iter_mut().zip(&buf) {
                    *a += scale * t;
                }
            }
            action.iter_mut().for_each(|a| *a *= v);
        }
        kernel.push(action);
    }
    Ok(NodeData {
        test,
        pbar,
        fbar,
        kernel,
    })
}

fn explain_non_finite(data: &NodeData, rule: &QuadratureRule, psi: &PsiTable, j: usize) -> String {
    for (m, v) in rule.nodes().iter().enumerate() {
        if !data.pbar[m].is_finite() {
            return format!("p̄({v}) = {}", data.pbar[m]);
        }
        if !data.fbar[m].is_finite() {
            return format!("f̄({v}) = {}", data.fbar[m]);
        }
        if let Some(k) = data.kernel[m].get(j.wrapping_sub(1)) {
            if !k.is_finite() {
                return format!("kernel action on G_{j} at v = {v} is {k}");
            }
        }
        if j >= 1 {
            if let Ok(p) = psi.eval(j, *v) {
                if !p.is_finite() {
                    return format!("Ψ_{j}({v}) = {p}");
                }
            }
        }
    }
    "overflow while accumulating quadrature sums".to_string()
}

/// Assemble the order-N system on the (N+1)-point Gauss rule.
pub fn assemble(tp: &TransformedProblem<'_>, n: usize, psi: &PsiTable) -> Result<GalerkinSystem> {
    assemble_with_rule(tp, n, psi, n + 1)
}

/// [`assemble`] with a `points`-point rule in place of the usual N + 1,
/// for measuring the quadrature error committed by the standard system.
pub fn assemble_with_rule(
    tp: &TransformedProblem<'_>,
    n: usize,
    psi: &PsiTable,
    points: usize,
) -> Result<GalerkinSystem> {
    if n == 0 {
        return Err(invalid("Galerkin order must be at least 1"));
    }
    if psi.size() < n || psi.q() != tp.q() {
        return Err(invalid(format!(
            "psi table (N = {}, q = {}) does not match order {n} and q = {}",
            psi.size(),
            psi.q(),
            tp.q()
        )));
    }
    if points < n + 1 {
        return Err(invalid(format!(
            "assembly rule needs at least N + 1 = {} points, got {points}",
            n + 1
        )));
    }
    let rule = cached_rule(points)?;
    let data = sample(tp, &rule, n)?;
    let lambda = tp.lambda();

    // Ψ_j at the nodes; deg(Ψ_j T_i) <= 2N - 2 so this product is exact
    let psi_vals: Vec<Vec<f64>> = rule
        .nodes()
        .iter()
        .map(|&v| (1..=n).map(|j| psi.eval(j, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut matrix = Matrix::zeros(n);
    let mut rhs = vec![0.0; n];
    for (m, (v, delta)) in rule.iter().enumerate() {
        let t = &data.test[m];
        for i in 0..n {
            let wt = delta * t[i];
            rhs[i] += wt * data.fbar[m];
            for j in 0..n {
                let trial = 2.0 * v * t[j];
                let integrand = psi_vals[m][j] - data.pbar[m] * trial - lambda * data.kernel[m][j];
                matrix[(i, j)] += wt * integrand;
            }
        }
    }

    for i in 0..n {
        if !rhs[i].is_finite() {
            return Err(Error::NonFiniteEntry {
                row: i + 1,
                col: 0,
                detail: format!("right-hand side: {}", explain_non_finite(&data, &rule, psi, 0)),
            });
        }
        for j in 0..n {
            if !matrix[(i, j)].is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: i + 1,
                    col: j + 1,
                    detail: explain_non_finite(&data, &rule, psi, j + 1),
                });
            }
        }
    }

    Ok(GalerkinSystem {
        order: n,
        matrix,
        rhs,
        q: tp.q(),
        lambda,
        rule_points: rule.points(),
    })
}

/// Solve the assembled system by LU with partial pivoting.
pub fn lu_solve(sys: &GalerkinSystem) -> Result<(Vec<f64>, SolveDiagnostics)> {
    dense_solve(&sys.matrix, &sys.rhs)
}
