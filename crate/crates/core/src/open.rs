//! Open-system engine: pure dephasing on top of non-Hermitian dynamics.
//!
//! Master equation (trace-renormalized Lindblad form):
//!
//!   dρ/dt = -i(Hρ - ρH†) + Σ_k γ_k (L_k ρ L_k† - ½{L_k†L_k, ρ})
//!           - i·Tr[ρ(H† - H)]·ρ
//!
//! with σz-type jump operators, applied per qubit (local) or through the
//! summed σz (collective). The linear part 𝓛₀ acts on column-stacked states:
//!
//!   𝓛₀ = -i(I⊗H - H*⊗I) + Σ_k γ_k (L_k*⊗L_k - ½ I⊗(L_k†L_k) - ½ (L_k†L_k)ᵀ⊗I)
//!
//! Its spectrum {μ_j = 𝓔_j + iη_j}, sorted by descending 𝓔_j, fixes the
//! steady state (top eigenmatrix) and the relaxation time 1/Δ𝓔 through the
//! Liouvillian gap Δ𝓔 = 𝓔₁ - 𝓔₂.

use ndarray::Array2;
use num_complex::Complex64;

use crate::closed::{clustered_desc_order, rhs_closed_raw, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{
    dagger, eig_general, eig_values, expm, eye, frobenius_norm, kron, max_abs, trace, unvectorize,
    vectorize, CMat, EigenSystem,
};
use crate::models::{sigma_z_on, QubitHamiltonian};
use crate::ode::{integrate_grid, OdeOptions};

const VANISHING_TRACE: f64 = 1e-30;
/// Tie tolerance (relative to ‖𝓛₀‖) for degenerate leading eigenvalues.
const GAP_TIE_EPS: f64 = 1e-9;

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pure-dephasing channel strengths: one local σz rate per qubit plus one
/// collective rate for L = Σ_j σz^{(j)}.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingConfig {
    local: Vec<f64>,
    collective: f64,
}

impl DephasingConfig {
    pub fn new(local: Vec<f64>, collective: f64) -> Result<Self> {
        if local.iter().any(|&g| g < 0.0 || !g.is_finite())
            || collective < 0.0
            || !collective.is_finite()
        {
            return Err(Error::InvalidDensity("dephasing rates must be >= 0".into()));
        }
        Ok(Self { local, collective })
    }

    /// No dissipation on an n-qubit register.
    pub fn none(n_qubits: usize) -> Self {
        Self {
            local: vec![0.0; n_qubits],
            collective: 0.0,
        }
    }

    /// Two-qubit channels: γ₁ (L₁ = σz⊗I), γ₂ (L₂ = I⊗σz), γ₃ (collective).
    pub fn two_qubit(gamma1: f64, gamma2: f64, gamma3: f64) -> Result<Self> {
        Self::new(vec![gamma1, gamma2], gamma3)
    }

    /// The same local rate on every qubit, no collective channel.
    pub fn uniform_local(n_qubits: usize, gamma: f64) -> Result<Self> {
        Self::new(vec![gamma; n_qubits], 0.0)
    }

    /// Collective channel only.
    pub fn collective(n_qubits: usize, gamma: f64) -> Result<Self> {
        Self::new(vec![0.0; n_qubits], gamma)
    }

    pub fn n_qubits(&self) -> usize {
        self.local.len()
    }

    pub fn local_rates(&self) -> &[f64] {
        &self.local
    }

    pub fn collective_rate(&self) -> f64 {
        self.collective
    }

    /// Active (rate, jump operator) pairs; channels with zero rate are
    /// dropped.
    pub fn jump_operators(&self) -> Vec<(f64, CMat)> {
        let n = self.n_qubits();
        let mut ops = Vec::new();
        for (j, &g) in self.local.iter().enumerate() {
            if g > 0.0 {
                ops.push((g, sigma_z_on(n, j)));
            }
        }
        if self.collective > 0.0 {
            let dim = 1usize << n;
            let mut sum: CMat = Array2::zeros((dim, dim));
            for j in 0..n {
                sum = sum + sigma_z_on(n, j);
            }
            ops.push((self.collective, sum));
        }
        ops
    }
}

fn check_dims(h: &QubitHamiltonian, deph: &DephasingConfig) -> Result<()> {
    if h.n_qubits != deph.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits,
            found: deph.n_qubits(),
        });
    }
    Ok(())
}

fn check_state(h: &QubitHamiltonian, rho: &DensityMatrix) -> Result<()> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Σ_k γ_k (L_k ρ L_k† - ½{L_k†L_k, ρ}) on a raw matrix.
pub(crate) fn dissipator_raw(ops: &[(f64, CMat)], rho: &CMat) -> CMat {
    let mut acc: CMat = Array2::zeros(rho.raw_dim());
    for (gamma, l) in ops {
        let ld = dagger(l);
        let ldl = ld.dot(l);
        let sandwich = l.dot(rho).dot(&ld);
        let anti = ldl.dot(rho) + rho.dot(&ldl);
        acc = acc + (sandwich - anti.mapv(|z| z * cplx(0.5))).mapv(|z| z * cplx(*gamma));
    }
    acc
}

pub(crate) fn rhs_open_raw(hm: &CMat, ops: &[(f64, CMat)], rho: &CMat) -> CMat {
    rhs_closed_raw(hm, rho) + dissipator_raw(ops, rho)
}

/// Full master-equation right-hand side; traceless to round-off.
pub fn rhs_open(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    rho: &DensityMatrix,
) -> Result<CMat> {
    check_dims(h, deph)?;
    check_state(h, rho)?;
    Ok(rhs_open_raw(&h.matrix, &deph.jump_operators(), rho.matrix()))
}

/// Assemble the dim²×dim² matrix of 𝓛₀ in the column-stacking convention.
pub fn build_liouvillian(h: &QubitHamiltonian, deph: &DephasingConfig) -> Result<CMat> {
    check_dims(h, deph)?;
    let dim = h.dim();
    let id = eye(dim);
    let minus_i = Complex64::new(0.0, -1.0);
    let h_conj = h.matrix.mapv(|z| z.conj());
    let mut l0 = (kron(&id, &h.matrix) - kron(&h_conj, &id)).mapv(|z| z * minus_i);
    for (gamma, l) in deph.jump_operators() {
        let l_conj = l.mapv(|z| z.conj());
        let ldl = dagger(&l).dot(&l);
        let ldl_t = ldl.t().to_owned();
        let term = kron(&l_conj, &l)
            - kron(&id, &ldl).mapv(|z| z * cplx(0.5))
            - kron(&ldl_t, &id).mapv(|z| z * cplx(0.5));
        l0 = l0 + term.mapv(|z| z * cplx(gamma));
    }
    Ok(l0)
}

fn normalize_by_trace(m: &CMat, t: f64) -> Result<CMat> {
    let tr = trace(m);
    let floor = VANISHING_TRACE * frobenius_norm(m).max(1.0);
    if tr.norm() < floor.max(VANISHING_TRACE) {
        return Err(Error::VanishingNorm { t });
    }
    Ok(m.mapv(|z| z / tr))
}

/// ρ(t) = unvec(e^{𝓛₀t} vec ρ₀) normalized by its trace.
pub fn propagate_open(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    check_dims(h, deph)?;
    check_state(h, rho0)?;
    assert!(t >= 0.0, "propagation time must be nonnegative");
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let l0 = build_liouvillian(h, deph)?;
    let prop = expm(&l0.mapv(|z| z * cplx(t)))?;
    let v = prop.dot(&vectorize(rho0.matrix()));
    let m = unvectorize(&v)?;
    DensityMatrix::from_matrix(normalize_by_trace(&m, t)?)
}

/// Exact open propagation on a uniform grid: one e^{𝓛₀ dt}, repeatedly
/// applied to the vectorized state with running rescaling.
pub fn propagate_open_grid(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    check_dims(h, deph)?;
    check_state(h, rho0)?;
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
    let l0 = build_liouvillian(h, deph)?;
    let step = expm(&l0.mapv(|z| z * cplx(dt)))?;
    let mut v = vectorize(rho0.matrix());
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(rho0.clone());
    for &t in &t_grid[1..] {
        v = step.dot(&v);
        let scale = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(1e-100..=1e100).contains(&scale) {
            v.mapv_inplace(|z| z / cplx(scale));
        }
        let m = unvectorize(&v)?;
        out.push(DensityMatrix::from_matrix(normalize_by_trace(&m, t)?)?);
    }
    Ok(out)
}

/// Adaptive integration of [`rhs_open`] (rtol 1e-9, atol 1e-12) with per-step
/// trace renormalization.
pub fn integrate_open(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    check_dims(h, deph)?;
    check_state(h, rho0)?;
    assert!(!t_grid.is_empty() && t_grid[0] == 0.0, "grid must start at 0");
    let hm = h.matrix.clone();
    let ops = deph.jump_operators();
    let states = integrate_grid(
        |y| rhs_open_raw(&hm, &ops, y),
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

/// Sorted eigensystem of 𝓛₀ with unvectorized eigenmatrices.
#[derive(Debug, Clone)]
pub struct LiouvillianSpectrum {
    /// μ_j = 𝓔_j + iη_j, sorted by descending 𝓔_j (ties by descending η_j).
    pub eigenvalues: Vec<Complex64>,
    /// Eigenmatrices ρ_j. ρ₁ is scaled to unit trace when its trace is
    /// nonzero; the others have unit Frobenius norm with their first
    /// significant entry made real positive.
    pub eigenmatrices: Vec<CMat>,
    /// Liouvillian gap Δ𝓔 = 𝓔₁ - 𝓔₂.
    pub gap: f64,
    /// Δη = η₁ - η₂.
    pub delta_eta: f64,
    /// Trace-normalized top eigenmatrix; `None` when the leading eigenvalue
    /// is not effectively real or its eigenmatrix is traceless (purely
    /// oscillatory top of the spectrum).
    pub steady_state: Option<DensityMatrix>,
    /// Sorted biorthogonal mode system of 𝓛₀ (left vectors give the
    /// initial-state mode amplitudes).
    pub modes: EigenSystem,
}

impl LiouvillianSpectrum {
    /// Mode amplitudes C_j of an initial state, C_j = ⟨left_j | vec(ρ₀)⟩ in
    /// the raw sorted eigenbasis.
    pub fn mode_amplitudes(&self, rho0: &DensityMatrix) -> Vec<Complex64> {
        let v = vectorize(rho0.matrix());
        (0..self.modes.dim())
            .map(|j| {
                self.modes.left_vectors[j]
                    .iter()
                    .zip(v.iter())
                    .map(|(w, x)| w * x)
                    .sum()
            })
            .collect()
    }

    /// Overlap C₁ of an initial state with the steady mode. Near-zero values
    /// mean the asymptotic state is not governed by the top eigenmatrix.
    pub fn steady_state_overlap(&self, rho0: &DensityMatrix) -> Complex64 {
        self.mode_amplitudes(rho0)[0]
    }

    /// Asymptotic deviation matrix (C₂/C₁)·ρ₂ of an initial state: the
    /// amplitude of the slowest decaying mode near the steady state;
    /// ρ(t) ≈ ρ₁ + R·e^{-Δ𝓔 t}e^{-iΔη t} with this R. Diagnostic overlay
    /// only, never used for propagation. `None` when C₁ is at round-off.
    pub fn asymptotic_deviation(&self, rho0: &DensityMatrix) -> Option<CMat> {
        let amps = self.mode_amplitudes(rho0);
        if amps[0].norm() < 1e-12 {
            return None;
        }
        let ratio = amps[1] / amps[0];
        let rho2 = unvectorize(&self.modes.right_vectors[1]).ok()?;
        Some(rho2.mapv(|z| z * ratio))
    }
}

/// Relaxation time τ_o = 1/Δ𝓔 from the Liouvillian gap.
pub fn relaxation_time_open(spectrum: &LiouvillianSpectrum) -> Result<f64> {
    if spectrum.gap <= 1e-12 {
        return Err(Error::ZeroGap);
    }
    Ok(1.0 / spectrum.gap)
}

/// Solve the eigenproblem of 𝓛₀ and package the sorted spectrum.
///
/// Fails when 𝓛₀ is defective (its eigenbasis cannot be biorthonormalized)
/// or when the top two eigenvalues coincide entirely, which leaves the
/// steady state non-unique.
pub fn liouvillian_spectrum(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
) -> Result<LiouvillianSpectrum> {
    let l0 = build_liouvillian(h, deph)?;
    let sys = eig_general(&l0)?;
    if sys.defective {
        return Err(Error::Defective {
            cluster: sys.eigenvalues.clone(),
        });
    }
    let norm = frobenius_norm(&l0).max(f64::MIN_POSITIVE);
    let tie = GAP_TIE_EPS * norm;
    let order = clustered_desc_order(&sys.eigenvalues, |z| z.re, |z| z.im, tie);
    let sys = sys.reordered(&order);

    let mu1 = sys.eigenvalues[0];
    let mu2 = sys.eigenvalues[1];
    if (mu1.re - mu2.re).abs() <= tie && (mu1.im - mu2.im).abs() <= tie {
        return Err(Error::NonUniqueSteadyState);
    }

    let mut eigenmatrices = Vec::with_capacity(sys.dim());
    let mut steady_state = None;
    for (j, v) in sys.right_vectors.iter().enumerate() {
        let m = unvectorize(v)?;
        if j == 0 {
            let tr = trace(&m);
            let traceful = tr.norm() > 1e-10 * frobenius_norm(&m).max(f64::MIN_POSITIVE);
            let real_top = mu1.im.abs() <= tie.max(1e-12);
            if traceful && real_top {
                let normalized = m.mapv(|z| z / tr);
                steady_state = Some(DensityMatrix::from_matrix(normalized.clone())?);
                eigenmatrices.push(normalized);
                continue;
            }
        }
        eigenmatrices.push(unit_frobenius_phase_fixed(&m));
    }

    Ok(LiouvillianSpectrum {
        gap: mu1.re - mu2.re,
        delta_eta: mu1.im - mu2.im,
        eigenvalues: sys.eigenvalues.clone(),
        eigenmatrices,
        steady_state,
        modes: sys,
    })
}

/// Scale to unit Frobenius norm and rotate the first significant entry
/// (row-major scan) to the positive real axis.
fn unit_frobenius_phase_fixed(m: &CMat) -> CMat {
    let norm = frobenius_norm(m);
    if norm == 0.0 {
        return m.clone();
    }
    let scaled = m.mapv(|z| z / cplx(norm));
    let cutoff = 1e-12 * max_abs(&scaled).max(f64::MIN_POSITIVE);
    match scaled.iter().find(|z| z.norm() > cutoff) {
        Some(z) => {
            let phase = z / z.norm();
            scaled.mapv(|w| w / phase)
        }
        None => scaled,
    }
}

/// Largest |dρ_nn/dt| over the local basis, from the full master equation.
/// Vanishes identically for APT tensor-sum Hamiltonians on diagonal states.
pub fn freezing_diagnostic(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    rho: &DensityMatrix,
) -> Result<f64> {
    check_dims(h, deph)?;
    check_state(h, rho)?;
    let rhs = rhs_open_raw(&h.matrix, &deph.jump_operators(), rho.matrix());
    Ok(rhs.diag().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// γ-scaling exponent of the off-diagonal flow between two strong dephasing
/// strengths (defaults 1e2 and 1e3): the log-slope of the largest
/// off-diagonal |dρ_ij/dt| against γ. Pure dephasing kills coherences at a
/// rate linear in γ, so the exponent sits at 1; populations stay untouched.
pub fn offdiagonal_gamma_exponent(
    h: &QubitHamiltonian,
    channel: impl Fn(f64) -> DephasingConfig,
    rho: &DensityMatrix,
) -> Result<f64> {
    let (g1, g2) = (1e2, 1e3);
    let max_offdiag = |gamma: f64| -> Result<f64> {
        let deph = channel(gamma);
        check_dims(h, &deph)?;
        let rhs = rhs_open_raw(&h.matrix, &deph.jump_operators(), rho.matrix());
        let mut worst = 0.0f64;
        for i in 0..rhs.nrows() {
            for j in 0..rhs.ncols() {
                if i != j {
                    worst = worst.max(rhs[[i, j]].norm());
                }
            }
        }
        Ok(worst)
    };
    let r1 = max_offdiag(g1)?;
    let r2 = max_offdiag(g2)?;
    if r1 <= 0.0 || r2 <= 0.0 {
        return Err(Error::ZeroGap);
    }
    Ok((r2 / r1).ln() / (g2 / g1).ln())
}

/// One row of a dephasing-strength sweep of the Liouvillian spectrum.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub gamma: f64,
    /// Real parts 𝓔_j, sorted descending.
    pub real_parts: Vec<f64>,
    /// Δ𝓔 of the top two (clustered ties broken by descending η).
    pub gap: f64,
    /// Failure for this point, if any; the sweep continues.
    pub error: Option<String>,
}

/// Summary statistics of a gap-vs-γ sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepSummary {
    pub gap_at_max_gamma: f64,
    pub max_gap: f64,
    pub argmax_gamma: f64,
}

/// Sweep the Liouvillian spectrum over dephasing strengths. Eigenvalues come
/// from the Schur form alone, so near-degenerate (exceptional) points still
/// produce a row.
pub fn spectrum_sweep(
    h: &QubitHamiltonian,
    deph_family: impl Fn(f64) -> DephasingConfig,
    gammas: &[f64],
) -> (Vec<SweepRow>, SweepSummary) {
    assert!(!gammas.is_empty(), "empty gamma list");
    let mut rows = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let deph = deph_family(gamma);
        let row = match build_liouvillian(h, &deph).and_then(|l0| {
            let vals = eig_values(&l0)?;
            let norm = frobenius_norm(&l0).max(f64::MIN_POSITIVE);
            let order = clustered_desc_order(&vals, |z| z.re, |z| z.im, GAP_TIE_EPS * norm);
            let sorted: Vec<Complex64> = order.iter().map(|&i| vals[i]).collect();
            Ok(sorted)
        }) {
            Ok(sorted) => SweepRow {
                gamma,
                gap: sorted[0].re - sorted[1].re,
                real_parts: sorted.iter().map(|z| z.re).collect(),
                error: None,
            },
            Err(e) => SweepRow {
                gamma,
                real_parts: Vec::new(),
                gap: f64::NAN,
                error: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    let last = rows
        .iter()
        .rev()
        .find(|r| r.error.is_none())
        .map(|r| r.gap)
        .unwrap_or(f64::NAN);
    let (max_gap, argmax_gamma) = rows
        .iter()
        .filter(|r| r.error.is_none())
        .fold((f64::NEG_INFINITY, f64::NAN), |acc, r| {
            if r.gap > acc.0 {
                (r.gap, r.gamma)
            } else {
                acc
            }
        });
    (
        rows,
        SweepSummary {
            gap_at_max_gamma: last,
            max_gap,
            argmax_gamma,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        build_apt_qubit, build_apt_qubit_general, build_pt_qubit, build_uniform_tensor_sum,
        QubitHamiltonian,
    };

    fn pt2(a: f64) -> QubitHamiltonian {
        build_uniform_tensor_sum(&build_pt_qubit(a), 2).unwrap()
    }

    fn apt2(b: f64) -> QubitHamiltonian {
        build_uniform_tensor_sum(&build_apt_qubit(b), 2).unwrap()
    }

    fn frob_diff(a: &CMat, b: &CMat) -> f64 {
        frobenius_norm(&(a - b))
    }

    fn random_density(dim: usize, seed: &mut u64) -> DensityMatrix {
        let mut next = || {
            *seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut g: CMat = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                g[[i, j]] = Complex64::new(next(), next());
            }
        }
        // GG†/Tr is Hermitian PSD with unit trace.
        let m = g.dot(&dagger(&g));
        let tr = trace(&m);
        DensityMatrix::from_matrix(m.mapv(|z| z / tr)).unwrap()
    }

    #[test]
    fn zero_hamiltonian_zero_rates_gives_zero_liouvillian() {
        let h = QubitHamiltonian::from_matrix(Array2::zeros((4, 4))).unwrap();
        let l0 = build_liouvillian(&h, &DephasingConfig::none(2)).unwrap();
        assert_eq!(max_abs(&l0), 0.0);
    }

    #[test]
    fn hermitian_liouvillian_spectrum_is_imaginary() {
        let h = build_uniform_tensor_sum(&build_pt_qubit(0.0), 2).unwrap();
        let l0 = build_liouvillian(&h, &DephasingConfig::none(2)).unwrap();
        let vals = eig_values(&l0).unwrap();
        for v in vals {
            assert!(v.re.abs() < 1e-9, "nonzero real part {v}");
        }
    }

    #[test]
    fn liouvillian_action_matches_direct_superoperator() {
        let h = apt2(0.5);
        let deph = DephasingConfig::two_qubit(0.0, 0.0, 0.1).unwrap();
        let l0 = build_liouvillian(&h, &deph).unwrap();
        let ops = deph.jump_operators();
        let mut seed = 11u64;
        for _ in 0..20 {
            let rho = random_density(4, &mut seed);
            let via_matrix = unvectorize(&l0.dot(&vectorize(rho.matrix()))).unwrap();
            // -i(Hρ - ρH†) + Σ D_k[ρ]: no trace correction in 𝓛₀.
            let direct =
                rhs_closed_raw(&h.matrix, rho.matrix()) + dissipator_raw(&ops, rho.matrix())
                    - rho.matrix().mapv(|z| {
                        z * (Complex64::new(0.0, -1.0)
                            * trace(&rho.matrix().dot(&(dagger(&h.matrix) - &h.matrix))))
                    });
            let err = frob_diff(&via_matrix, &direct);
            assert!(err < 1e-12, "err = {err}");
        }
    }

    #[test]
    fn rhs_open_special_cases() {
        let h = apt2(0.5);
        // γ = 0 reduces to the closed equation.
        let rho = DensityMatrix::bell_psi_plus();
        let open = rhs_open(&h, &DephasingConfig::none(2), &rho).unwrap();
        let closed = rhs_closed_raw(&h.matrix, rho.matrix());
        assert!(frob_diff(&open, &closed) < 1e-15);
        // Maximally mixed state: σz dephasing contributes nothing.
        let mixed = DensityMatrix::maximally_mixed(2);
        let deph = DephasingConfig::two_qubit(0.3, 0.2, 0.4).unwrap();
        let with_deph = rhs_open(&h, &deph, &mixed).unwrap();
        let without = rhs_open(&h, &DephasingConfig::none(2), &mixed).unwrap();
        assert!(frob_diff(&with_deph, &without) < 1e-14);
        // Hermitian H: the correction term vanishes, plain Lindblad remains.
        let hh = build_uniform_tensor_sum(&build_pt_qubit(0.0), 2).unwrap();
        let rhs = rhs_open(&hh, &deph, &rho).unwrap();
        let ops = deph.jump_operators();
        let minus_i = Complex64::new(0.0, -1.0);
        let lindblad = (hh.matrix.dot(rho.matrix()) - rho.matrix().dot(&hh.matrix))
            .mapv(|z| z * minus_i)
            + dissipator_raw(&ops, rho.matrix());
        assert!(frob_diff(&rhs, &lindblad) < 1e-13);
        // Trace conservation.
        assert!(trace(&rhs).norm() < 1e-12);
    }

    #[test]
    fn propagate_open_zero_time_and_closed_limit() {
        let h = apt2(0.5);
        let rho0 = DensityMatrix::bell_psi_plus();
        let none = DephasingConfig::none(2);
        let rho = propagate_open(&h, &none, &rho0, 0.0).unwrap();
        assert_eq!(rho.matrix(), rho0.matrix());
        for &t in &[0.5, 2.0] {
            let open = propagate_open(&h, &none, &rho0, t).unwrap();
            let closed = crate::closed::propagate_closed(&h, &rho0, t).unwrap();
            assert!(frob_diff(open.matrix(), closed.matrix()) < 1e-9);
        }
    }

    #[test]
    fn propagate_open_matches_integrator() {
        let h = apt2(0.5);
        let deph = DephasingConfig::two_qubit(0.0, 0.0, 0.2).unwrap();
        let rho0 = DensityMatrix::bell_psi_plus();
        let grid = [0.0, 1.0, 2.5, 5.0];
        let integrated = integrate_open(&h, &deph, &rho0, &grid).unwrap();
        for (k, &t) in grid.iter().enumerate() {
            let exact = propagate_open(&h, &deph, &rho0, t).unwrap();
            let err = frob_diff(integrated[k].matrix(), exact.matrix());
            assert!(err < 1e-7, "t={t}: err={err}");
        }
    }

    #[test]
    fn grid_propagation_matches_single_shot() {
        let h = pt2(1.25);
        let deph = DephasingConfig::two_qubit(0.1, 0.1, 0.0).unwrap();
        let rho0 = DensityMatrix::all_up(2);
        let grid: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let states = propagate_open_grid(&h, &deph, &rho0, &grid).unwrap();
        for &k in &[1usize, 13, 50] {
            let exact = propagate_open(&h, &deph, &rho0, grid[k]).unwrap();
            assert!(frob_diff(states[k].matrix(), exact.matrix()) < 1e-8);
        }
    }

    #[test]
    fn spectrum_unitary_single_qubit() {
        // H = σx, γ = 0: eigenvalues {0, 0, ±2i}, gap 0.
        let h = build_pt_qubit(0.0);
        let spec = liouvillian_spectrum(&h, &DephasingConfig::none(1)).unwrap();
        assert!(spec.gap.abs() < 1e-9);
        let mut ims: Vec<f64> = spec.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 2.0).abs() < 1e-9);
        assert!(ims[1].abs() < 1e-9 && ims[2].abs() < 1e-9);
        assert!((ims[3] - 2.0).abs() < 1e-9);
        for v in &spec.eigenvalues {
            assert!(v.re.abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_closed_apt_gap_matches_delta_gamma() {
        let spec = liouvillian_spectrum(&apt2(0.5), &DephasingConfig::none(2)).unwrap();
        let expect = 2.0 * 0.75f64.sqrt();
        assert!((spec.gap - expect).abs() < 1e-9, "gap {}", spec.gap);
        assert!((expect - 1.732051).abs() < 1e-6);
        // Steady state exists and is stationary for the normalized flow.
        let ss = spec.steady_state.as_ref().expect("steady state");
        let rhs = rhs_open(&apt2(0.5), &DephasingConfig::none(2), ss).unwrap();
        assert!(
            frobenius_norm(&rhs) < 1e-8,
            "stationarity {}",
            frobenius_norm(&rhs)
        );
    }

    #[test]
    fn spectrum_closed_limit_is_pairwise_differences() {
        let h = apt2(0.5);
        let spec = liouvillian_spectrum(&h, &DephasingConfig::none(2)).unwrap();
        let lam = eig_values(&h.matrix).unwrap();
        let mut expected: Vec<Complex64> = Vec::new();
        for m in &lam {
            for n in &lam {
                expected.push(Complex64::new(0.0, -1.0) * (m - n.conj()));
            }
        }
        let mut used = vec![false; expected.len()];
        for g in &spec.eigenvalues {
            let (best, dist) = expected
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, e)| (i, (g - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < 1e-8, "unmatched Liouvillian eigenvalue {g} ({dist})");
            used[best] = true;
        }
    }

    #[test]
    fn relaxation_time_from_gap() {
        let spec = liouvillian_spectrum(&apt2(0.5), &DephasingConfig::none(2)).unwrap();
        let tau = relaxation_time_open(&spec).unwrap();
        assert!((tau - 1.0 / (2.0 * 0.75f64.sqrt())).abs() < 1e-9);
        assert!((tau - 0.57735).abs() < 1e-5);
    }

    #[test]
    fn relaxation_time_increases_with_collective_dephasing() {
        let h = apt2(0.5);
        let mut last = 0.0;
        for &g in &[0.1, 0.3, 1.0] {
            let deph = DephasingConfig::two_qubit(0.0, 0.0, g).unwrap();
            let spec = liouvillian_spectrum(&h, &deph).unwrap();
            let tau = relaxation_time_open(&spec).unwrap();
            assert!(tau > last, "tau({g}) = {tau} not increasing");
            last = tau;
        }
    }

    #[test]
    fn zero_gap_is_signaled() {
        // APT-broken b = 2 at γ = 0: oscillatory top of the spectrum.
        let spec = liouvillian_spectrum(&apt2(2.0), &DephasingConfig::none(2)).unwrap();
        assert!(spec.gap.abs() < 1e-9);
        assert!(matches!(relaxation_time_open(&spec), Err(Error::ZeroGap)));
    }

    #[test]
    fn freezing_apt_diagonal_states() {
        let rho = DensityMatrix::from_diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let h = apt2(0.5);
        for &g in &[0.0, 1.0, 1e3] {
            let deph = DephasingConfig::two_qubit(g, g, g).unwrap();
            let fz = freezing_diagnostic(&h, &deph, &rho).unwrap();
            assert!(fz <= 1e-12, "freezing diagnostic {fz} at gamma {g}");
        }
    }

    #[test]
    fn freezing_apt_with_theta_cancels() {
        // θ-contributions cancel between the local term and the trace term.
        let h1 = build_apt_qubit_general(0.5, 0.2, 1.0, 0.0);
        let h = build_uniform_tensor_sum(&h1, 3).unwrap();
        let rho =
            DensityMatrix::from_diagonal(&[0.2, 0.15, 0.05, 0.1, 0.1, 0.12, 0.08, 0.2]).unwrap();
        for &g in &[0.0, 1.0, 1e3] {
            let deph = DephasingConfig::new(vec![g; 3], g).unwrap();
            let fz = freezing_diagnostic(&h, &deph, &rho).unwrap();
            assert!(fz <= 1e-12, "freezing diagnostic {fz} at gamma {g}");
        }
    }

    #[test]
    fn freezing_pt_is_nonzero() {
        let h = pt2(1.25);
        let rho = DensityMatrix::from_diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let deph = DephasingConfig::two_qubit(0.0, 0.0, 1.0).unwrap();
        let fz = freezing_diagnostic(&h, &deph, &rho).unwrap();
        // Hand expansion: dρ_nn/dt = 2 Im(H_nn) ρ_nn - 2 Σ_m Im(H_mm) ρ_mm ρ_nn
        // with Im(H_nn) = (2a, 0, 0, -2a).
        let a = 1.25;
        let imh = [2.0 * a, 0.0, 0.0, -2.0 * a];
        let pops = [0.4, 0.3, 0.2, 0.1];
        let leak: f64 = imh.iter().zip(&pops).map(|(i, p)| i * p).sum();
        let expect = imh
            .iter()
            .zip(&pops)
            .map(|(i, p)| (2.0 * i * p - 2.0 * leak * p).abs())
            .fold(0.0, f64::max);
        assert!((fz - expect).abs() < 1e-12, "{fz} vs {expect}");
        assert!(fz > 1.0);
    }

    #[test]
    fn sweep_apt_gap_strictly_decreasing() {
        let h = build_apt_qubit(0.5);
        let gammas: Vec<f64> = (0..=20).map(|k| k as f64).collect();
        let (rows, summary) = spectrum_sweep(
            &h,
            |g| DephasingConfig::uniform_local(1, g).unwrap(),
            &gammas,
        );
        for w in rows.windows(2) {
            assert!(
                w[1].gap < w[0].gap,
                "gap not decreasing at gamma {}",
                w[1].gamma
            );
        }
        assert!(summary.argmax_gamma == 0.0);
        assert!(summary.gap_at_max_gamma < 0.1 * rows[0].gap);
    }

    #[test]
    fn sweep_records_per_point_errors() {
        // A mismatched register size is a per-point failure, not a panic.
        let h = build_apt_qubit(0.5);
        let (rows, _) = spectrum_sweep(
            &h,
            |g| {
                if g > 0.5 {
                    DephasingConfig::none(3)
                } else {
                    DephasingConfig::uniform_local(1, g).unwrap()
                }
            },
            &[0.0, 1.0],
        );
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.is_some());
        assert!(rows[1].gap.is_nan());
    }

    #[test]
    fn steady_state_overlap_is_reported() {
        let h = apt2(0.5);
        let deph = DephasingConfig::two_qubit(0.0, 0.0, 0.1).unwrap();
        let spec = liouvillian_spectrum(&h, &deph).unwrap();
        let amps = spec.mode_amplitudes(&DensityMatrix::all_up(2));
        assert_eq!(amps.len(), 16);
        let c1 = spec.steady_state_overlap(&DensityMatrix::all_up(2));
        assert!(c1.norm() > 1e-6, "vanishing steady-state overlap {c1}");
        let overlay = spec.asymptotic_deviation(&DensityMatrix::all_up(2));
        assert!(overlay.is_some());
    }

    #[test]
    fn offdiagonal_decay_scales_linearly_in_gamma() {
        let h = apt2(0.5);
        let rho = DensityMatrix::bell_psi_plus();
        let exponent = offdiagonal_gamma_exponent(
            &h,
            |g| DephasingConfig::uniform_local(2, g).unwrap(),
            &rho,
        )
        .unwrap();
        assert!((exponent - 1.0).abs() < 1e-6, "exponent {exponent}");
    }

    #[test]
    fn dephasing_config_validation() {
        assert!(DephasingConfig::new(vec![-0.1], 0.0).is_err());
        assert!(DephasingConfig::new(vec![f64::NAN], 0.0).is_err());
        assert!(DephasingConfig::two_qubit(0.1, 0.0, 0.2).is_ok());
        let h = apt2(0.5);
        assert!(matches!(
            build_liouvillian(&h, &DephasingConfig::none(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn collective_jump_operator_is_summed_sigma_z() {
        let deph = DephasingConfig::two_qubit(0.2, 0.3, 0.5).unwrap();
        let ops = deph.jump_operators();
        assert_eq!(ops.len(), 3);
        let diag: Vec<f64> = ops[2].1.diag().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![2.0, 0.0, 0.0, -2.0]);
    }
}

#[cfg(test)]
mod desk_scale_tests {
    use super::*;
    use crate::models::{build_apt_qubit, build_uniform_tensor_sum};

    #[test]
    fn three_qubit_liouvillian_spectrum_resolves() {
        // 64x64 superoperator: the largest eigenproblem the engine targets.
        let h = build_uniform_tensor_sum(&build_apt_qubit(0.5), 3).unwrap();
        let deph = DephasingConfig::collective(3, 0.1).unwrap();
        let spec = liouvillian_spectrum(&h, &deph).unwrap();
        assert_eq!(spec.eigenvalues.len(), 64);
        assert!(spec.gap > 0.0);
        let ss = spec.steady_state.as_ref().expect("steady state");
        let rhs = rhs_open(&h, &deph, ss).unwrap();
        assert!(frobenius_norm(&rhs) < 1e-8, "stationarity {}", frobenius_norm(&rhs));
        // Top eigenmatrix really is an eigenvector of the assembled matrix.
        let l0 = build_liouvillian(&h, &deph).unwrap();
        let v = vectorize(spec.steady_state.as_ref().unwrap().matrix());
        let lv = l0.dot(&v);
        let mu1 = spec.eigenvalues[0];
        let resid: f64 = lv
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - mu1 * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(resid < 1e-8, "eigen residual {resid}");
    }
}
