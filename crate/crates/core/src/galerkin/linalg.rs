//! Dense LU factorization with partial pivoting and a 1-norm condition
//! estimate.

use crate::error::{invalid, Error, Result};

pub(crate) const PIVOT_FLOOR: f64 = 1e-300;
const CONDEST_ITERATIONS: usize = 5;

/// Square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix rows must all have length equal to the row count"));
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// `P A = L U` with unit-diagonal L stored below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot.is_nan() || pivot < PIVOT_FLOOR {
                return Err(Error::SingularMatrix { col: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / d;
                lu[(i, k)] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= m * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.dim();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    /// Solve `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.dim();
        // Aᵀ = Uᵀ Lᵀ P
        let mut y = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(j, i)] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(j, i)] * y[j]).sum();
            y[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    /// Hager's estimate of `‖A⁻¹‖₁`.
    pub fn inverse_norm_1_estimate(&self) -> f64 {
        let n = self.lu.dim();
        if n == 0 {
            return 0.0;
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut estimate = 0.0;
        for iter in 0..CONDEST_ITERATIONS {
            let y = self.solve(&x);
            estimate = y.iter().map(|v| v.abs()).sum();
            let xi: Vec<f64> = y.iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi);
            let (j, zmax) =
                z.iter()
                    .map(|v| v.abs())
                    .enumerate()
                    .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if iter > 0 && zmax <= ztx {
                break;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
        }
        estimate
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveDiagnostics {
    /// `‖Ax - b‖₂ / ‖b‖₂` (absolute when b = 0).
    pub residual: f64,
    /// Estimate of `‖A‖₁ ‖A⁻¹‖₁`.
    pub condition_estimate: f64,
}

/// Solve a dense square system, returning the solution and diagnostics.
pub fn dense_solve(a: &Matrix, b: &[f64]) -> Result<(Vec<f64>, SolveDiagnostics)> {
    if b.len() != a.dim() {
        return Err(invalid(format!(
            "right-hand side has length {}, matrix is {}x{}",
            b.len(),
            a.dim(),
            a.dim()
        )));
    }
    let lu = LuFactors::factor(a)?;
    let x = lu.solve(b);
    let ax = a.mul_vec(&x);
    let r_norm = ax.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual = if b_norm > 0.0 { r_norm / b_norm } else { r_norm };
    let condition_estimate = a.norm_1() * lu.inverse_norm_1_estimate();
    Ok((
        x,
        SolveDiagnostics {
            residual,
            condition_estimate,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_inverse_norm_1(a: &Matrix) -> f64 {
        let lu = LuFactors::factor(a).unwrap();
        let n = a.dim();
        (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                lu.solve(&e).iter().map(|v| v.abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_system() {
        let b = vec![3.0, -1.0, 0.5];
        let (x, diag) = dense_solve(&Matrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
        assert_eq!(diag.residual, 0.0);
        assert_eq!(diag.condition_estimate, 1.0);
    }

    #[test]
    fn scalar_system() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let a = Matrix::from_rows(&[vec![sqrt_pi]]).unwrap();
        let (x, _) = dense_solve(&a, &[1.0]).unwrap();
        assert!((x[0] - 0.564_189_583_547_756_3).abs() < 1e-16);
    }

    #[test]
    fn two_by_two() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let (x, diag) = dense_solve(&a, &[3.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(diag.residual < 1e-15);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let (x, _) = dense_solve(&a, &[2.0, 5.0]).unwrap();
        assert_eq!(x, vec![5.0, 2.0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            dense_solve(&a, &[1.0, 1.0]),
            Err(Error::SingularMatrix { col: 1, .. })
        ));
        assert!(matches!(
            dense_solve(&Matrix::zeros(2), &[0.0, 0.0]),
            Err(Error::SingularMatrix { col: 0, .. })
        ));
    }

    #[test]
    fn transpose_solve() {
        let a = Matrix::from_rows(&[vec![4.0, -2.0, 1.0], vec![3.0, 6.0, -4.0], vec![2.0, 1.0, 8.0]]).unwrap();
        let lu = LuFactors::factor(&a).unwrap();
        let b = [1.0, 2.0, 3.0];
        let x = lu.solve_transpose(&b);
        for j in 0..3 {
            let s: f64 = (0..3).map(|i| a[(i, j)] * x[i]).sum();
            assert!((s - b[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn condition_estimate_is_a_lower_bound_close_to_exact() {
        let a = Matrix::from_rows(&[
            vec![1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0],
            vec![1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0],
            vec![1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0, 1.0 / 6.0],
            vec![1.0 / 4.0, 1.0 / 5.0, 1.0 / 6.0, 1.0 / 7.0],
        ])
        .unwrap();
        let lu = LuFactors::factor(&a).unwrap();
        let est = lu.inverse_norm_1_estimate();
        let exact = brute_inverse_norm_1(&a);
        assert!(est <= exact * (1.0 + 1e-10));
        assert!(est >= 0.3 * exact);
    }

    #[test]
    fn mismatched_rhs() {
        assert!(dense_solve(&Matrix::identity(2), &[1.0]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0, 2.0]]).is_err());
    }
}
