//! Closed non-Hermitian dynamics of the trace-normalized density matrix.
//!
//! Propagation route: ρ(t) = e^{-iHt} ρ₀ e^{iH†t} / Tr[·]. Equation-of-motion
//! route: dρ/dt = -i(Hρ - ρH†) - i·Tr[ρ(H† - H)]·ρ, whose correction term
//! makes the flow trace-preserving (and nonlinear). The spectral route
//! expands ρ₀ over biorthogonal eigenvectors of H and evolves each term with
//! e^{-i(λ_m - λ_n*)t}. The three routes agree and cross-check each other.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    check_square_finite, dagger, eig_general, expm, frobenius_norm, max_abs, trace, CMat, CVec,
    EigenSystem,
};
use crate::models::QubitHamiltonian;
use crate::ode::{integrate_grid, OdeOptions};

const TRACE_TOL: f64 = 1e-10;
const HERMITICITY_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const VANISHING_TRACE: f64 = 1e-30;
/// Relative tolerance for clustering nearly equal decay rates when sorting
/// spectra; exact degeneracies in the models are structural.
const SORT_CLUSTER_EPS: f64 = 1e-9;

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Trace-one, Hermitian, positive-semidefinite state of an n-qubit register.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMat,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Validate and wrap a matrix: trace 1 within 1e-10, Hermitian within
    /// 1e-10, eigenvalues ≥ -1e-10.
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        check_square_finite(&matrix)?;
        let dim = matrix.nrows();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidDensity(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        let tr = trace(&matrix);
        if (tr - cplx(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let asym = max_abs(&(&matrix - &dagger(&matrix)));
        if asym > HERMITICITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian: max asymmetry {asym:.3e}"
            )));
        }
        let eigs = crate::linalg::eig_values(&matrix)?;
        let min_eig = eigs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        Ok(Self { matrix, n_qubits })
    }

    /// Pure state ψψ† from an (unnormalized) state vector.
    pub fn pure(state: &CVec) -> Result<Self> {
        let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let dim = state.len();
        let mut m: CMat = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                m[[i, j]] = state[i] * state[j].conj() / cplx(norm * norm);
            }
        }
        Self::from_matrix(m)
    }

    /// Projector onto a computational-basis state (|↑⟩ = index bit 0).
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim);
        let mut m: CMat = Array2::zeros((dim, dim));
        m[[index, index]] = cplx(1.0);
        Self { matrix: m, n_qubits }
    }

    /// |↑…↑⟩⟨↑…↑|.
    pub fn all_up(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, 0)
    }

    /// |↓…↓⟩⟨↓…↓|.
    pub fn all_down(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, (1 << n_qubits) - 1)
    }

    /// Two-qubit Bell state (|↑↓⟩ + |↓↑⟩)/√2.
    pub fn bell_psi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let state = Array1::from_vec(vec![cplx(0.0), cplx(s), cplx(s), cplx(0.0)]);
        Self::pure(&state).expect("Bell state is a valid pure state")
    }

    /// I / 2ⁿ.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let m = Array2::eye(dim).mapv(|z: Complex64| z / cplx(dim as f64));
        Self { matrix: m, n_qubits }
    }

    /// Diagonal state from populations (normalized to unit trace).
    pub fn from_diagonal(populations: &[f64]) -> Result<Self> {
        if populations.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidDensity("negative population".into()));
        }
        let total: f64 = populations.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDensity("zero total population".into()));
        }
        let dim = populations.len();
        let mut m: CMat = Array2::zeros((dim, dim));
        for (i, &p) in populations.iter().enumerate() {
            m[[i, i]] = cplx(p / total);
        }
        Self::from_matrix(m)
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix.dot(&self.matrix).diag().sum().re
    }
}

fn check_dims(h: &QubitHamiltonian, rho: &DensityMatrix) -> Result<()> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Normalize an unnormalized evolved matrix by its trace.
fn normalize_by_trace(m: &CMat, t: f64) -> Result<CMat> {
    let tr = trace(m);
    let floor = VANISHING_TRACE * frobenius_norm(m).max(1.0);
    if tr.norm() < floor.max(VANISHING_TRACE) {
        return Err(Error::VanishingNorm { t });
    }
    Ok(m.mapv(|z| z / tr))
}

/// Right-hand side of the trace-preserving equation of motion, on raw
/// matrices (integrator stages are not exact density matrices).
pub(crate) fn rhs_closed_raw(hm: &CMat, rho: &CMat) -> CMat {
    let hd = dagger(hm);
    let comm = hm.dot(rho) - rho.dot(&hd);
    let minus_i = Complex64::new(0.0, -1.0);
    let leak = trace(&rho.dot(&(&hd - hm))) * minus_i;
    comm.mapv(|z| z * minus_i) + rho.mapv(|z| z * leak)
}

/// dρ/dt = -i(Hρ - ρH†) - i·Tr[ρ(H† - H)]·ρ. The result is traceless to
/// round-off: the correction term cancels the non-Hermitian trace leak.
pub fn rhs_closed(h: &QubitHamiltonian, rho: &DensityMatrix) -> Result<CMat> {
    check_dims(h, rho)?;
    Ok(rhs_closed_raw(&h.matrix, rho.matrix()))
}

/// ρ(t) = e^{-iHt} ρ₀ e^{iH†t} / Tr[·] via the matrix exponential.
pub fn propagate_closed(
    h: &QubitHamiltonian,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    check_dims(h, rho0)?;
    assert!(t >= 0.0, "propagation time must be nonnegative");
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let minus_i_t = Complex64::new(0.0, -t);
    let u = expm(&h.matrix.mapv(|z| z * minus_i_t))?;
    let evolved = u.dot(rho0.matrix()).dot(&dagger(&u));
    DensityMatrix::from_matrix(normalize_by_trace(&evolved, t)?)
}

/// Exact propagation on a uniform time grid; one matrix exponential for the
/// step, then repeated application with running rescaling so broken-phase
/// growth cannot overflow.
pub fn propagate_closed_grid(
    h: &QubitHamiltonian,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    check_dims(h, rho0)?;
    assert!(!t_grid.is_empty() && t_grid[0] == 0.0, "grid must start at 0");
    if t_grid.len() == 1 {
        return Ok(vec![rho0.clone()]);
    }
    let dt = t_grid[1] - t_grid[0];
    assert!(
        t_grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(1.0)),
        "grid must be uniform"
    );
    let u = expm(&h.matrix.mapv(|z| z * Complex64::new(0.0, -dt)))?;
    let mut prop: CMat = Array2::eye(h.dim());
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(rho0.clone());
    for &t in &t_grid[1..] {
        prop = u.dot(&prop);
        let scale = frobenius_norm(&prop);
        if !(1e-100..=1e100).contains(&scale) {
            prop.mapv_inplace(|z| z / cplx(scale));
        }
        let evolved = prop.dot(rho0.matrix()).dot(&dagger(&prop));
        out.push(DensityMatrix::from_matrix(normalize_by_trace(&evolved, t)?)?);
    }
    Ok(out)
}

/// Adaptive integration of [`rhs_closed`] (rtol 1e-9, atol 1e-12); every
/// accepted step is renormalized by its trace to suppress drift of the
/// nonlinear flow.
pub fn integrate_closed(
    h: &QubitHamiltonian,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    check_dims(h, rho0)?;
    assert!(!t_grid.is_empty() && t_grid[0] == 0.0, "grid must start at 0");
    let hm = h.matrix.clone();
    let states = integrate_grid(
        |y| rhs_closed_raw(&hm, y),
        rho0.matrix(),
        t_grid,
        OdeOptions::default(),
        |y, t| {
            *y = normalize_by_trace(y, t)?;
            Ok(())
        },
    )?;
    states.into_iter().map(DensityMatrix::from_matrix).collect()
}

/// Dynamical regime of a closed non-Hermitian system, read off the top two
/// eigenvalues of H sorted by descending imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    DampedOscillation { period: f64, relax_rate: f64 },
    PureOscillation { period: f64 },
    PureDecay { relax_rate: f64 },
}

impl Regime {
    pub fn period(&self) -> Option<f64> {
        match self {
            Regime::DampedOscillation { period, .. } | Regime::PureOscillation { period } => {
                Some(*period)
            }
            Regime::PureDecay { .. } => None,
        }
    }

    pub fn relax_rate(&self) -> Option<f64> {
        match self {
            Regime::DampedOscillation { relax_rate, .. } | Regime::PureDecay { relax_rate } => {
                Some(*relax_rate)
            }
            Regime::PureOscillation { .. } => None,
        }
    }
}

/// Order eigenvalue indices descending by `key1`, clustering values closer
/// than `tol` and breaking ties inside a cluster descending by `key2`.
pub(crate) fn clustered_desc_order(
    vals: &[Complex64],
    key1: impl Fn(&Complex64) -> f64,
    key2: impl Fn(&Complex64) -> f64,
    tol: f64,
) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&i, &j| key1(&vals[j]).total_cmp(&key1(&vals[i])));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && key1(&vals[idx[end - 1]]) - key1(&vals[idx[end]]) <= tol {
            end += 1;
        }
        let cluster = &mut idx[start..end];
        cluster.sort_by(|&i, &j| key2(&vals[j]).total_cmp(&key2(&vals[i])));
        out.extend_from_slice(cluster);
        start = end;
    }
    out
}

fn spectral_order(vals: &[Complex64], norm: f64) -> Vec<usize> {
    clustered_desc_order(vals, |z| z.im, |z| z.re, SORT_CLUSTER_EPS * norm.max(1e-300))
}

/// Classify the dynamical regime from ΔE and ΔΓ of the top two eigenvalues.
///
/// `eps` is relative to the Frobenius norm of H (default 1e-9 via
/// [`classify_regime_default`]).
pub fn classify_regime(h: &QubitHamiltonian, eps: f64) -> Result<Regime> {
    let vals = crate::linalg::eig_values(&h.matrix)?;
    let norm = frobenius_norm(&h.matrix);
    let order = spectral_order(&vals, norm);
    let l1 = vals[order[0]];
    let l2 = vals[order[1]];
    let delta_e = (l1.re - l2.re).abs();
    let delta_gamma = l1.im - l2.im;
    let thresh = eps * norm;
    if delta_e <= thresh && delta_gamma <= thresh {
        return Err(Error::AmbiguousRegime);
    }
    if delta_gamma <= thresh {
        Ok(Regime::PureOscillation {
            period: 2.0 * std::f64::consts::PI / delta_e,
        })
    } else if delta_e <= thresh {
        Ok(Regime::PureDecay {
            relax_rate: delta_gamma,
        })
    } else {
        Ok(Regime::DampedOscillation {
            period: 2.0 * std::f64::consts::PI / delta_e,
            relax_rate: delta_gamma,
        })
    }
}

/// [`classify_regime`] at the default tolerance 1e-9.
pub fn classify_regime_default(h: &QubitHamiltonian) -> Result<Regime> {
    classify_regime(h, 1e-9)
}

/// Spectral decomposition of an initial state over the biorthogonal
/// eigenbasis of H, with eigenvalues sorted by descending imaginary part
/// (ties by descending real part).
#[derive(Debug, Clone)]
pub struct SpectralState {
    /// Sorted eigensystem of H (Γ₁ ≥ Γ₂ ≥ …).
    pub eigen: EigenSystem,
    /// ρ_mn = ⟨χ_m|ρ₀|χ_n⟩ / (⟨χ_m|φ_m⟩⟨φ_n|χ_n⟩).
    pub coefficients: CMat,
    /// |E₁ - E₂|.
    pub delta_e: f64,
    /// Γ₁ - Γ₂ ≥ 0.
    pub delta_gamma: f64,
    /// ρ₂₁/ρ₁₁ (main-text index convention for the subleading amplitude).
    pub ratio_r1: Complex64,
    /// ρ₁₂/ρ₁₁ (transposed index convention; see `ratio_r1`). Both are
    /// exposed because the two passages defining R₁ disagree; diagnostics
    /// only, never used in propagation.
    pub ratio_r1_transposed: Complex64,
}

impl SpectralState {
    /// ρ(t) from the expansion Σ_mn ρ_mn e^{-i(λ_m - λ_n*)t}|φ_m⟩⟨φ_n|,
    /// normalized by its trace.
    pub fn reconstruct_at(&self, t: f64) -> Result<DensityMatrix> {
        let n = self.eigen.dim();
        let mut acc: CMat = Array2::zeros((n, n));
        for m in 0..n {
            let lm = self.eigen.eigenvalues[m];
            for k in 0..n {
                let ln = self.eigen.eigenvalues[k];
                let omega = lm - ln.conj();
                let phase = (Complex64::new(0.0, -t) * omega).exp();
                let w = self.coefficients[[m, k]] * phase;
                if w.norm() == 0.0 {
                    continue;
                }
                let phi_m = &self.eigen.right_vectors[m];
                let phi_n = &self.eigen.right_vectors[k];
                for i in 0..n {
                    for j in 0..n {
                        acc[[i, j]] += w * phi_m[i] * phi_n[j].conj();
                    }
                }
            }
        }
        DensityMatrix::from_matrix(normalize_by_trace(&acc, t)?)
    }
}

/// Expand `rho0` over the eigenbasis of `h`. Fails at exceptional points,
/// where Eq.-(3)-style expansions are invalid.
pub fn spectral_decompose(h: &QubitHamiltonian, rho0: &DensityMatrix) -> Result<SpectralState> {
    check_dims(h, rho0)?;
    let sys = eig_general(&h.matrix)?;
    if sys.defective {
        return Err(Error::Defective {
            cluster: sys.eigenvalues.clone(),
        });
    }
    let norm = frobenius_norm(&h.matrix);
    let order = spectral_order(&sys.eigenvalues, norm);
    let sys = sys.reordered(&order);

    let n = sys.dim();
    let rho_m = rho0.matrix();
    // overlap_m = ⟨χ_m|φ_m⟩ (≈ 1 for the biorthonormalized basis, kept for
    // robustness against rescaled eigenvectors).
    let overlaps: Vec<Complex64> = (0..n)
        .map(|m| {
            sys.left_vectors[m]
                .iter()
                .zip(sys.right_vectors[m].iter())
                .map(|(w, v)| w * v)
                .sum()
        })
        .collect();
    let mut coeff: CMat = Array2::zeros((n, n));
    for m in 0..n {
        // Row vector ⟨χ_m|ρ₀.
        let mut row: CVec = Array1::zeros(n);
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += sys.left_vectors[m][i] * rho_m[[i, j]];
            }
            row[j] = acc;
        }
        for k in 0..n {
            // ⟨χ_m|ρ₀|χ_k⟩ with |χ_k⟩ the adjoint of the left row vector.
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += row[j] * sys.left_vectors[k][j].conj();
            }
            coeff[[m, k]] = acc / (overlaps[m] * overlaps[k].conj());
        }
    }

    let l1 = sys.eigenvalues[0];
    let l2 = sys.eigenvalues[1];
    let rho11 = coeff[[0, 0]];
    let (ratio_r1, ratio_r1_transposed) = if rho11.norm() > 0.0 {
        (coeff[[1, 0]] / rho11, coeff[[0, 1]] / rho11)
    } else {
        (Complex64::new(f64::NAN, 0.0), Complex64::new(f64::NAN, 0.0))
    };
    Ok(SpectralState {
        coefficients: coeff,
        delta_e: (l1.re - l2.re).abs(),
        delta_gamma: l1.im - l2.im,
        ratio_r1,
        ratio_r1_transposed,
        eigen: sys,
    })
}
