//! Dense complex linear-algebra kernels.
//!
//! Everything here works on plain `ndarray` matrices of `Complex64`. The
//! vectorization convention is column-stacking: element (i, j) of a d×d
//! matrix maps to vector index j·d + i, so that vec(A X B) = (Bᵀ ⊗ A) vec(X).

mod eig;
mod expm;
mod lu;

pub use eig::{eig_general, EigenSystem};
pub(crate) use eig::eig_values;
pub use expm::expm;
pub use lu::{solve, Lu};

use ndarray::{Array1, Array2, ShapeBuilder};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix.
pub type CMat = Array2<Complex64>;
/// Dense complex vector.
pub type CVec = Array1<Complex64>;

/// Check that a matrix is square with finite entries.
pub fn check_square_finite(m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Matrix trace.
pub fn trace(m: &CMat) -> Complex64 {
    m.diag().sum()
}

/// Frobenius norm.
pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Induced 1-norm (maximum column sum).
pub fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Identity matrix of dimension `n`.
pub fn eye(n: usize) -> CMat {
    Array2::eye(n)
}

/// Kronecker product with block layout a[i][j]·b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization: element (i, j) goes to index j·d + i.
pub fn vectorize(m: &CMat) -> CVec {
    Array1::from_iter(m.t().iter().cloned())
}

/// Inverse of [`vectorize`]. Fails unless the length is a perfect square.
pub fn unvectorize(v: &CVec) -> Result<CMat> {
    let len = v.len();
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len {
        return Err(Error::BadVectorLength { len });
    }
    Ok(Array2::from_shape_vec((d, d).f(), v.to_vec()).expect("shape checked"))
}

/// Trace norm Tr √(m†m): the sum of singular values.
///
/// Computed from the eigenvalues of the Hermitian product m†m. Eigenvalues
/// at the round-off floor (including negative ones) are clipped to zero:
/// square roots of noise-level values would otherwise leak ~√ε into the sum.
pub fn trace_norm(m: &CMat) -> f64 {
    check_square_finite(m).expect("trace_norm requires a valid square matrix");
    let gram = dagger(m).dot(m);
    let vals = eig_values(&gram).expect("eigenvalues of a finite Hermitian product");
    let floor = 64.0 * f64::EPSILON * one_norm(&gram);
    vals.iter()
        .map(|z| if z.re > floor { z.re.sqrt() } else { 0.0 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> CMat {
        array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
    }

    fn sigma_z() -> CMat {
        array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
    }

    #[test]
    fn kron_sigma_z_identity_is_diagonal() {
        let out = kron(&sigma_z(), &eye(2));
        let expect = [1.0, 1.0, -1.0, -1.0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(out[[i, i]], c(e, 0.0));
        }
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 4);
    }

    #[test]
    fn kron_identity_identity() {
        assert_eq!(kron(&eye(2), &eye(2)), eye(4));
    }

    #[test]
    fn kron_sigma_x_sigma_x_is_antidiagonal() {
        // Expanding the block definition by hand: row i pairs with column 3-i.
        let out = kron(&sigma_x(), &sigma_x());
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(out[[i, j]], c(expect, 0.0));
            }
        }
    }

    #[test]
    fn vectorize_column_stacks() {
        let m = array![[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 0.0)]];
        let v = vectorize(&m);
        assert_eq!(v.to_vec(), vec![c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(unvectorize(&v).unwrap(), m);
    }

    #[test]
    fn unvectorize_rejects_bad_length() {
        let v = Array1::from_vec(vec![c(1.0, 0.0); 5]);
        assert!(matches!(
            unvectorize(&v),
            Err(Error::BadVectorLength { len: 5 })
        ));
    }

    #[test]
    fn trace_norm_identity_and_diagonal() {
        assert!((trace_norm(&eye(2)) - 2.0).abs() < 1e-12);
        let d = array![[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.5, 0.0)]];
        assert!((trace_norm(&d) - 1.0).abs() < 1e-12);
    }
}
