//! Dense real least squares via Householder QR.
//!
//! The constraint systems in this crate are tiny (13x8 and 5x4), integer
//! entried, and well conditioned, so an unpivoted QR with explicit reflectors
//! is both sufficient and easy to audit. `solve` returns the minimum-residual
//! solution; for consistent systems the residual is at machine level.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::tolerances;

/// QR factorization of a tall matrix, reusable across many right-hand sides.
pub struct LeastSquares {
    /// Upper triangle holds R; entries below the diagonal are zeroed.
    r: Array2<f64>,
    /// Unit Householder vectors; reflector `j` acts on rows `j..`.
    reflectors: Vec<Vec<f64>>,
    rows: usize,
    cols: usize,
}

impl LeastSquares {
    /// Factor an m x n matrix with m >= n.
    pub fn new(a: &Array2<f64>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows < cols {
            return Err(Error::InvalidValue {
                what: "least-squares matrix",
                detail: format!("underdetermined: {rows} rows < {cols} cols"),
            });
        }
        let mut r = a.clone();
        let mut reflectors = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut v: Vec<f64> = (j..rows).map(|i| r[[i, j]]).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                reflectors.push(Vec::new());
                continue;
            }
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                // Column already reduced; nothing to reflect.
                reflectors.push(Vec::new());
                continue;
            }
            for x in &mut v {
                *x /= vnorm;
            }
            // Apply I - 2 v v^T to the trailing columns.
            for c in j..cols {
                let dot: f64 = (j..rows).map(|i| v[i - j] * r[[i, c]]).sum();
                for i in j..rows {
                    r[[i, c]] -= 2.0 * dot * v[i - j];
                }
            }
            r[[j, j]] = alpha;
            for i in (j + 1)..rows {
                r[[i, j]] = 0.0;
            }
            reflectors.push(v);
        }
        Ok(Self { r, reflectors, rows, cols })
    }

    /// Numerical rank: diagonal entries of R above `tolerances::RANK` relative
    /// to the largest one.
    pub fn rank(&self) -> usize {
        let max_pivot = (0..self.cols)
            .map(|j| self.r[[j, j]].abs())
            .fold(0.0_f64, f64::max);
        if max_pivot == 0.0 {
            return 0;
        }
        (0..self.cols)
            .filter(|&j| self.r[[j, j]].abs() > tolerances::RANK * max_pivot)
            .count()
    }

    /// Minimum-residual solution of `A x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solve_with_residual(rhs).map(|(x, _)| x)
    }

    /// Minimum-residual solution plus the 2-norm of `A x - rhs`.
    pub fn solve_with_residual(&self, rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch { left: rhs.len(), right: self.rows });
        }
        let rank = self.rank();
        if rank != self.cols {
            return Err(Error::RankDeficient { rank, expected: self.cols });
        }
        // y = Q^T rhs, applied reflector by reflector.
        let mut y = rhs.to_vec();
        for (j, v) in self.reflectors.iter().enumerate() {
            if v.is_empty() {
                continue;
            }
            let dot: f64 = (j..self.rows).map(|i| v[i - j] * y[i]).sum();
            for i in j..self.rows {
                y[i] -= 2.0 * dot * v[i - j];
            }
        }
        // Back substitution on R x = y[..cols].
        let mut x = vec![0.0; self.cols];
        for i in (0..self.cols).rev() {
            let tail: f64 = ((i + 1)..self.cols).map(|j| self.r[[i, j]] * x[j]).sum();
            x[i] = (y[i] - tail) / self.r[[i, i]];
        }
        let residual = y[self.cols..].iter().map(|t| t * t).sum::<f64>().sqrt();
        Ok((x, residual))
    }
}

/// One-shot convenience wrapper around [`LeastSquares`].
pub fn lstsq(a: &Array2<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    LeastSquares::new(a)?.solve(rhs)
}
