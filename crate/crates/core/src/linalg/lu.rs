//! LU decomposition with partial pivoting for dense complex matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use super::CMat;

/// LU factorization P·A = L·U stored compactly (Doolittle, unit lower part).
pub struct Lu {
    lu: Array2<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &CMat) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            // Partial pivot: largest magnitude in column k at or below the diagonal.
            let mut p = k;
            let mut pmax = lu[[k, k]].norm();
            for i in k + 1..n {
                let m = lu[[i, k]].norm();
                if m > pmax {
                    pmax = m;
                    p = i;
                }
            }
            if pmax == 0.0 {
                // Singular to working precision; keep a zero pivot and let
                // solves produce infs the caller can detect.
                continue;
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[[k, j]];
                    lu[[k, j]] = lu[[p, j]];
                    lu[[p, j]] = tmp;
                }
            }
            let pivot = lu[[k, k]];
            for i in k + 1..n {
                let factor = lu[[i, k]] / pivot;
                lu[[i, k]] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[[k, j]];
                    lu[[i, j]] -= sub;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Solve A x = b for a single right-hand side.
    pub fn solve_vec(&self, b: &Array1<Complex64>) -> Array1<Complex64> {
        let n = self.dim();
        let mut x = Array1::zeros(n);
        for i in 0..n {
            x[i] = b[self.perm[i]];
        }
        // Forward substitution with unit lower triangle.
        for i in 0..n {
            for j in 0..i {
                let sub = self.lu[[i, j]] * x[j];
                x[i] -= sub;
            }
        }
        // Back substitution.
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[[i, j]] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[[i, i]];
        }
        x
    }

    /// Solve A X = B column by column.
    pub fn solve_mat(&self, b: &CMat) -> CMat {
        let n = self.dim();
        let mut x = Array2::zeros((n, b.ncols()));
        for j in 0..b.ncols() {
            let col = self.solve_vec(&b.column(j).to_owned());
            x.column_mut(j).assign(&col);
        }
        x
    }

    /// A^{-1} via solves against the identity.
    pub fn inverse(&self) -> CMat {
        let n = self.dim();
        self.solve_mat(&Array2::eye(n))
    }
}

/// Solve A X = B with a fresh factorization.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    Ok(Lu::factor(a)?.solve_mat(b))
}
