//! General (non-normal) complex eigendecomposition.
//!
//! Pipeline: Householder reduction to upper Hessenberg form, implicit
//! single-shift QR iteration with Wilkinson shifts (Givens rotations,
//! accumulated into a unitary Z), then right eigenvectors by triangular
//! back-substitution on the Schur factor. Left eigenvectors come from the
//! inverse of the right-eigenvector matrix, which makes the pair
//! biorthonormal by construction: ⟨χ_m|φ_n⟩ = δ_mn.
//!
//! Degenerate eigenvalue clusters of a diagonalizable matrix (the models
//! here have exact double-zero eigenvalues) stay well conditioned under this
//! scheme; a genuinely defective matrix (exceptional point) drives the
//! eigenvector matrix singular, which is detected and flagged instead of
//! fabricating left eigenvectors.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::lu::Lu;
use super::{check_square_finite, max_abs, one_norm, CMat, CVec};
use crate::error::{Error, Result};

/// Condition-number threshold beyond which the eigenvector basis is treated
/// as defective (exceptional point).
const DEFECTIVE_COND: f64 = 1e8;
/// Biorthonormality residual allowed for a non-defective system.
const BIORTH_TOL: f64 = 1e-8;
/// QR iteration budget per matrix dimension.
const MAX_ITER_PER_EIGENVALUE: usize = 40;

/// Biorthogonal eigendecomposition of a (possibly non-normal) matrix.
///
/// `right_vectors[m]` is the column |φ_m⟩ with A|φ_m⟩ = λ_m|φ_m⟩;
/// `left_vectors[m]` holds the components of the row ⟨χ_m| with
/// ⟨χ_m|A = λ_m⟨χ_m|. Eigenvalues are in iteration order; callers impose
/// their own sort.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<Complex64>,
    pub right_vectors: Vec<CVec>,
    pub left_vectors: Vec<CVec>,
    /// True when the eigenvector basis could not be biorthonormalized
    /// (overlap condition number above 1e8). Left vectors are then
    /// unreliable and spectral expansions must not be used.
    pub defective: bool,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// max_{m,n} |⟨χ_m|φ_n⟩ − δ_mn|.
    pub fn biorthonormality_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for m in 0..n {
            for k in 0..n {
                let dot: Complex64 = self.left_vectors[m]
                    .iter()
                    .zip(self.right_vectors[k].iter())
                    .map(|(w, v)| w * v)
                    .sum();
                let target = if m == k {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Σ_m λ_m |φ_m⟩⟨χ_m| — reproduces the source matrix when non-defective.
    pub fn reconstruct(&self) -> CMat {
        let n = self.dim();
        let mut out = Array2::zeros((n, n));
        for m in 0..n {
            let lam = self.eigenvalues[m];
            for i in 0..n {
                let fi = self.right_vectors[m][i];
                for j in 0..n {
                    out[[i, j]] += lam * fi * self.left_vectors[m][j];
                }
            }
        }
        out
    }

    /// Same system with eigenpairs rearranged by `perm`.
    pub fn reordered(&self, perm: &[usize]) -> EigenSystem {
        EigenSystem {
            eigenvalues: perm.iter().map(|&i| self.eigenvalues[i]).collect(),
            right_vectors: perm.iter().map(|&i| self.right_vectors[i].clone()).collect(),
            left_vectors: perm.iter().map(|&i| self.left_vectors[i].clone()).collect(),
            defective: self.defective,
        }
    }
}

/// Complex Givens rotation: returns (c, s) with c real so that
/// [c s; -s̄ c]·[f; g] = [r; 0].
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let denom = fa.hypot(ga);
    let c = fa / denom;
    let phase = f / fa;
    let s = phase * g.conj() / denom;
    (c, s)
}

/// Householder reduction A = Q H Q† with H upper Hessenberg, Q unitary.
fn hessenberg(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q: CMat = Array2::eye(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        // Reflector for x = H[k+1.., k].
        let m = n - k - 1;
        let mut v: CVec = Array1::zeros(m);
        for i in 0..m {
            v[i] = h[[k + 1 + i, k]];
        }
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vsq = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vsq == 0.0 {
            continue;
        }
        let tau = 2.0 / vsq;

        // Left: H[k+1.., k..] -= tau v (v† H[k+1.., k..]).
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..m {
                dot += v[i].conj() * h[[k + 1 + i, j]];
            }
            let dot = dot * tau;
            for i in 0..m {
                let sub = v[i] * dot;
                h[[k + 1 + i, j]] -= sub;
            }
        }
        // Right: H[.., k+1..] -= tau (H[.., k+1..] v) v†.
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in 0..m {
                dot += h[[i, k + 1 + j]] * v[j];
            }
            let dot = dot * tau;
            for j in 0..m {
                let sub = dot * v[j].conj();
                h[[i, k + 1 + j]] -= sub;
            }
        }
        // Accumulate Q <- Q·Hk.
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in 0..m {
                dot += q[[i, k + 1 + j]] * v[j];
            }
            let dot = dot * tau;
            for j in 0..m {
                let sub = dot * v[j].conj();
                q[[i, k + 1 + j]] -= sub;
            }
        }
        // Zero the annihilated entries explicitly.
        h[[k + 1, k]] = alpha;
        for i in k + 2..n {
            h[[i, k]] = Complex64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Eigenvalues of a 2x2 block; used for the Wilkinson shift.
fn two_by_two_eigs(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    (half_tr + disc, half_tr - disc)
}

/// Schur decomposition A = Z T Z† via implicit single-shift QR on the
/// Hessenberg form. T comes back upper triangular.
fn schur(a: &CMat) -> Result<(CMat, CMat)> {
    let n = a.nrows();
    let (mut h, mut z) = hessenberg(a);
    if n == 1 {
        return Ok((h, z));
    }
    let eps = f64::EPSILON;
    let hnorm = one_norm(&h).max(f64::MIN_POSITIVE);
    let zero = Complex64::new(0.0, 0.0);

    let max_total = MAX_ITER_PER_EIGENVALUE * n;
    let mut total_iters = 0usize;
    let mut stagnation = 0usize;
    let mut hi = n - 1;

    loop {
        // Deflate converged trailing eigenvalues and find the active block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[[lo, lo - 1]].norm();
            let mut tol = eps * (h[[lo - 1, lo - 1]].norm() + h[[lo, lo]].norm());
            if tol == 0.0 {
                tol = eps * hnorm;
            }
            if sub <= tol {
                h[[lo, lo - 1]] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            if hi == 0 {
                break;
            }
            hi -= 1;
            stagnation = 0;
            continue;
        }

        total_iters += 1;
        stagnation += 1;
        if total_iters > max_total {
            return Err(Error::NonConvergence {
                iterations: total_iters,
            });
        }

        // Shift selection.
        let sigma = if stagnation.is_multiple_of(12) {
            // Exceptional shift to break symmetric stalls.
            h[[hi, hi]] + Complex64::new(0.75 * h[[hi, hi - 1]].norm(), 0.0)
        } else {
            let (m1, m2) = two_by_two_eigs(
                h[[hi - 1, hi - 1]],
                h[[hi - 1, hi]],
                h[[hi, hi - 1]],
                h[[hi, hi]],
            );
            if (m1 - h[[hi, hi]]).norm() <= (m2 - h[[hi, hi]]).norm() {
                m1
            } else {
                m2
            }
        };

        // Implicit single-shift QR sweep over the active block.
        let mut x = h[[lo, lo]] - sigma;
        let mut y = h[[lo + 1, lo]];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let cs = Complex64::new(c, 0.0);
            // Rows k, k+1.
            let col_start = if k > lo { k - 1 } else { lo };
            for j in col_start..n {
                let t1 = h[[k, j]];
                let t2 = h[[k + 1, j]];
                h[[k, j]] = cs * t1 + s * t2;
                h[[k + 1, j]] = -s.conj() * t1 + cs * t2;
            }
            // Columns k, k+1.
            let row_end = usize::min(k + 3, hi + 1);
            for i in 0..row_end {
                let t1 = h[[i, k]];
                let t2 = h[[i, k + 1]];
                h[[i, k]] = cs * t1 + s.conj() * t2;
                h[[i, k + 1]] = -s * t1 + cs * t2;
            }
            // Accumulate Z <- Z G†.
            for i in 0..n {
                let t1 = z[[i, k]];
                let t2 = z[[i, k + 1]];
                z[[i, k]] = cs * t1 + s.conj() * t2;
                z[[i, k + 1]] = -s * t1 + cs * t2;
            }
            if k + 1 < hi {
                x = h[[k + 1, k]];
                y = h[[k + 2, k]];
            }
        }
    }

    // Clean the strict lower triangle (converged subdiagonals carry noise).
    for i in 1..n {
        for j in 0..i {
            h[[i, j]] = zero;
        }
    }
    Ok((h, z))
}

/// Right eigenvector of the triangular factor for eigenvalue at index `idx`,
/// transformed back through Z and normalized.
fn triangular_eigenvector(t: &CMat, z: &CMat, idx: usize, smallnum: f64) -> CVec {
    let n = t.nrows();
    let lambda = t[[idx, idx]];
    let mut y: CVec = Array1::zeros(n);
    y[idx] = Complex64::new(1.0, 0.0);
    for j in (0..idx).rev() {
        let mut s = Complex64::new(0.0, 0.0);
        for k in j + 1..=idx {
            s += t[[j, k]] * y[k];
        }
        let mut d = t[[j, j]] - lambda;
        if d.norm() < smallnum {
            // Perturbed pivot; for a semisimple repeated eigenvalue the
            // numerator vanishes too, so this only mixes within the
            // eigenspace.
            d = Complex64::new(smallnum, 0.0);
        }
        y[j] = -s / d;
        let mag = y[j].norm();
        if mag > 1e120 {
            let scale = Complex64::new(1.0 / mag, 0.0);
            for k in j..=idx {
                y[k] *= scale;
            }
        }
    }
    let mut v = z.dot(&y);
    let norm = v.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.mapv_inplace(|w| w / norm);
    }
    v
}

/// Eigenvalues only (Schur diagonal); cheaper than a full decomposition.
pub(crate) fn eig_values(m: &CMat) -> Result<Vec<Complex64>> {
    check_square_finite(m)?;
    let (t, _) = schur(m)?;
    Ok(t.diag().to_vec())
}

/// Full biorthogonal eigendecomposition.
///
/// Fails only on invalid input or non-convergence of the QR iteration;
/// a defective (exceptional-point) matrix is reported through the
/// `defective` flag with usable eigenvalues and right vectors.
pub fn eig_general(m: &CMat) -> Result<EigenSystem> {
    check_square_finite(m)?;
    let n = m.nrows();
    let (t, z) = schur(m)?;
    let smallnum = f64::EPSILON * one_norm(&t).max(f64::MIN_POSITIVE);

    let eigenvalues: Vec<Complex64> = t.diag().to_vec();
    let right_vectors: Vec<CVec> = (0..n)
        .map(|i| triangular_eigenvector(&t, &z, i, smallnum))
        .collect();

    // Left vectors = rows of V^{-1}; biorthonormal against the right set.
    let mut v: CMat = Array2::zeros((n, n));
    for (j, vec) in right_vectors.iter().enumerate() {
        v.column_mut(j).assign(vec);
    }
    let w = Lu::factor(&v)?.inverse();
    let finite = w.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    let (left_vectors, defective) = if finite {
        let cond = one_norm(&v) * one_norm(&w);
        let eye_n: CMat = Array2::eye(n);
        let residual = max_abs(&(w.dot(&v) - eye_n));
        let defective = cond > DEFECTIVE_COND || residual > BIORTH_TOL;
        let lefts = (0..n).map(|i| w.row(i).to_owned()).collect();
        (lefts, defective)
    } else {
        // Exactly singular eigenvector matrix: keep placeholder left vectors.
        ((0..n).map(|_| Array1::zeros(n)).collect(), true)
    };

    Ok(EigenSystem {
        eigenvalues,
        right_vectors,
        left_vectors,
        defective,
    })
}
