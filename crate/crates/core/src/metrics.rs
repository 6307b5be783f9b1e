//! Information-theoretic metrics and time-series feature extraction.
//!
//! Trace distance D(ρ₁, ρ₂) = ½ Tr|ρ₁ - ρ₂| witnesses information flow;
//! two-qubit concurrence C(ρ) = max{0, √r₁ - √r₂ - √r₃ - √r₄} (r_j the
//! descending eigenvalues of ρ·(σy⊗σy)·ρ*·(σy⊗σy)) measures entanglement.
//! Both inherit the oscillation period T = 2π/|ΔE| or relaxation rate ΔΓ of
//! the underlying density matrix; the extractors below measure those
//! fingerprints from sampled trajectories.

use num_complex::Complex64;

use crate::closed::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eig_values, kron, trace_norm, CMat};
use crate::models::sigma_y;

/// Which metric a trajectory samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    TraceDistance,
    Concurrence,
}

/// Which feature an extraction measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionKind {
    Period,
    RelaxTime,
}

/// ½ Tr|ρ₁ - ρ₂|; symmetric, zero iff the states coincide.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    let diff = rho1.matrix() - rho2.matrix();
    Ok(0.5 * trace_norm(&diff))
}

/// Two-qubit concurrence from the spin-flipped product matrix.
///
/// The eigenvalues r_j are nonnegative analytically; values within 1e-12 of
/// zero are clipped before the square roots so that round-off noise cannot
/// leak ~√ε terms into the difference.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::NotTwoQubits {
            n_qubits: rho.n_qubits(),
        });
    }
    let yy = kron(&sigma_y(), &sigma_y());
    let rho_conj = rho.matrix().mapv(|z| z.conj());
    let r: CMat = rho.matrix().dot(&yy).dot(&rho_conj).dot(&yy);
    let vals = eig_values(&r)?;
    let mut roots: Vec<f64> = vals
        .iter()
        .map(|z| if z.re > 1e-12 { z.re.sqrt() } else { 0.0 })
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// A sampled metric time series.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<f64>,
    kind: MetricKind,
}

impl Trajectory {
    /// Validate: strictly ascending times, finite values within
    /// [-1e-9, 1 + 1e-9].
    pub fn new(times: Vec<f64>, values: Vec<f64>, kind: MetricKind) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: values.len(),
            });
        }
        if !times.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidDensity(
                "trajectory times must be strictly ascending".into(),
            ));
        }
        let ok = values
            .iter()
            .all(|v| v.is_finite() && *v >= -1e-9 && *v <= 1.0 + 1e-9);
        if !ok {
            return Err(Error::InvalidDensity(
                "metric values must be finite and within [0, 1]".into(),
            ));
        }
        Ok(Self { times, values, kind })
    }

    /// Trace-distance series of two co-evolving state lists.
    pub fn trace_distance_series(
        times: &[f64],
        states1: &[DensityMatrix],
        states2: &[DensityMatrix],
    ) -> Result<Self> {
        let values: Result<Vec<f64>> = states1
            .iter()
            .zip(states2.iter())
            .map(|(a, b)| trace_distance(a, b))
            .collect();
        Self::new(times.to_vec(), values?, MetricKind::TraceDistance)
    }

    /// Concurrence series of one evolving two-qubit state list.
    pub fn concurrence_series(times: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        let values: Result<Vec<f64>> = states.iter().map(concurrence).collect();
        Self::new(times.to_vec(), values?, MetricKind::Concurrence)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// A measured dynamical fingerprint.
#[derive(Debug, Clone, Copy)]
pub struct ExtractionResult {
    pub kind: ExtractionKind,
    pub value: f64,
    /// R² of the tail fit, or 1 - (spacing std / mean) for periods;
    /// clamped to [0, 1].
    pub fit_quality: f64,
    /// Time span the feature was measured on.
    pub window: (f64, f64),
}

/// Three-point parabola vertex through samples around index `k`; falls back
/// to the sample time when the curvature is degenerate.
fn quadratic_vertex(times: &[f64], values: &[f64], k: usize) -> f64 {
    let (t0, t1, t2) = (times[k - 1], times[k], times[k + 1]);
    let (v0, v1, v2) = (values[k - 1], values[k], values[k + 1]);
    let denom = (t0 - t1) * (t0 - t2) * (t1 - t2);
    let a = (t2 * (v1 - v0) + t1 * (v0 - v2) + t0 * (v2 - v1)) / denom;
    let b = (t2 * t2 * (v0 - v1) + t1 * t1 * (v2 - v0) + t0 * t0 * (v1 - v2)) / denom;
    let t_peak = if a != 0.0 { -b / (2.0 * a) } else { t1 };
    if t_peak.is_finite() && t_peak > t0 && t_peak < t2 {
        t_peak
    } else {
        t1
    }
}

/// Interior local maxima. Peaks are segmented with 1%-of-range hysteresis
/// (so round-off wiggles on flat tops do not register as extra maxima) and
/// located at the midpoint of the level crossings one hysteresis step below
/// the top; sharp peaks spanning under three samples use the three-point
/// quadratic vertex instead. Peaks whose flanks touch the series boundary
/// are discarded.
fn refined_maxima(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let range = vmax - vmin;
    if !range.is_finite() || range <= 0.0 {
        return Vec::new();
    }
    let delta = 0.01 * range;

    // Hysteresis segmentation: one candidate index per rise-fall cycle.
    let mut candidates = Vec::new();
    let mut rising = true;
    let mut best = (0usize, values[0]);
    let mut trough = f64::INFINITY;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if rising {
            if v >= best.1 {
                best = (k, v);
            }
            if best.1 - v > delta {
                candidates.push(best.0);
                rising = false;
                trough = v;
            }
        } else {
            trough = trough.min(v);
            if v - trough > delta {
                rising = true;
                best = (k, v);
            }
        }
    }

    let cross = |i: usize, j: usize, level: f64| -> f64 {
        // Linear interpolation of the crossing time between samples i < j.
        let (ti, tj) = (times[i], times[j]);
        let (vi, vj) = (values[i], values[j]);
        if (vj - vi).abs() < f64::MIN_POSITIVE {
            0.5 * (ti + tj)
        } else {
            ti + (level - vi) / (vj - vi) * (tj - ti)
        }
    };

    let mut peaks = Vec::new();
    for &kp in &candidates {
        let level = values[kp] - delta;
        let mut i = kp;
        while i > 0 && values[i - 1] >= level {
            i -= 1;
        }
        let mut j = kp;
        while j + 1 < n && values[j + 1] >= level {
            j += 1;
        }
        if i == 0 || j == n - 1 {
            continue; // flank clipped by the series boundary
        }
        if j - i < 3 {
            peaks.push(quadratic_vertex(times, values, kp.clamp(1, n - 2)));
        } else {
            let left = cross(i - 1, i, level);
            let right = cross(j, j + 1, level);
            peaks.push(0.5 * (left + right));
        }
    }
    peaks
}

/// Dominant period from a two-stage periodogram scan (coarse Fourier bins,
/// then two local refinements).
fn dominant_period(times: &[f64], values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 8 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let span = times[n - 1] - times[0];
    let power = |f: f64| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, v) in times.iter().zip(centered.iter()) {
            let phase = Complex64::new(0.0, -2.0 * std::f64::consts::PI * f * t).exp();
            acc += Complex64::new(*v, 0.0) * phase;
        }
        acc.norm_sqr()
    };
    let kmax = n / 2;
    let mut best_f = 0.0;
    let mut best_p = 0.0;
    for k in 1..=kmax {
        let f = k as f64 / span;
        let p = power(f);
        if p > best_p {
            best_p = p;
            best_f = f;
        }
    }
    if best_p == 0.0 {
        return None;
    }
    let mut lo = (best_f - 1.0 / span).max(1e-12);
    let mut hi = best_f + 1.0 / span;
    for _ in 0..2 {
        let mut local_best = (best_f, best_p);
        for i in 0..=40 {
            let f = lo + (hi - lo) * i as f64 / 40.0;
            let p = power(f);
            if p > local_best.1 {
                local_best = (f, p);
            }
        }
        best_f = local_best.0;
        best_p = local_best.1;
        let step = (hi - lo) / 40.0;
        lo = (best_f - step).max(1e-12);
        hi = best_f + step;
    }
    Some(1.0 / best_f)
}

/// Oscillation period from the mean spacing of interior maxima.
///
/// Needs at least three maxima. The result is cross-checked against the
/// dominant discrete-spectrum period; disagreement beyond 2% (allowing the
/// waveform to sit at a harmonic of the fundamental) is an error.
pub fn extract_period(traj: &Trajectory) -> Result<ExtractionResult> {
    let peaks = refined_maxima(traj.times(), traj.values());
    if peaks.len() < 3 {
        return Err(Error::InsufficientOscillations { found: peaks.len() });
    }
    let spacings: Vec<f64> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let var = spacings.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / spacings.len() as f64;
    let fit_quality = (1.0 - var.sqrt() / mean).clamp(0.0, 1.0);

    if let Some(spectral) = dominant_period(traj.times(), traj.values()) {
        let consistent = (1..=4).any(|m| (mean - spectral * m as f64).abs() <= 0.02 * mean)
            || (2..=4).any(|m| (mean - spectral / m as f64).abs() <= 0.02 * mean);
        if !consistent {
            return Err(Error::PeriodSpectrumMismatch {
                quadratic: mean,
                spectral,
            });
        }
    }

    Ok(ExtractionResult {
        kind: ExtractionKind::Period,
        value: mean,
        fit_quality,
        window: (peaks[0], *peaks.last().unwrap()),
    })
}

/// Relaxation time from a least-squares fit of log|value - asymptote| over
/// the residual band [max(floor, 1e-6), 1e-1].
///
/// The asymptote is the mean of the last 5% of samples; the band keeps the
/// fit off both the early transient and the numerical floor.
pub fn extract_relax_time(traj: &Trajectory, floor: f64) -> Result<ExtractionResult> {
    let times = traj.times();
    let values = traj.values();
    let n = values.len();
    if n < 3 || values[n - 1] >= 0.5 * values[0] {
        return Err(Error::NoDecay);
    }
    let tail = (n / 20).max(1);
    let asymptote = values[n - tail..].iter().sum::<f64>() / tail as f64;
    let lo = floor.max(1e-6);
    let hi = 1e-1;

    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for k in 0..n {
        let r = (values[k] - asymptote).abs();
        if r >= lo && r <= hi {
            ts.push(times[k]);
            logs.push(r.ln());
        }
    }
    if ts.len() < 10 {
        return Err(Error::WindowTooShort { samples: ts.len() });
    }

    let m = ts.len() as f64;
    let tbar = ts.iter().sum::<f64>() / m;
    let lbar = logs.iter().sum::<f64>() / m;
    let sxx: f64 = ts.iter().map(|t| (t - tbar).powi(2)).sum();
    let sxy: f64 = ts
        .iter()
        .zip(logs.iter())
        .map(|(t, l)| (t - tbar) * (l - lbar))
        .sum();
    let slope = sxy / sxx;
    if slope >= 0.0 {
        return Err(Error::NoDecay);
    }
    let syy: f64 = logs.iter().map(|l| (l - lbar).powi(2)).sum();
    let r2 = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ExtractionResult {
        kind: ExtractionKind::RelaxTime,
        value: -1.0 / slope,
        fit_quality: r2,
        window: (ts[0], *ts.last().unwrap()),
    })
}

/// [`extract_relax_time`] with the default floor 1e-8.
pub fn extract_relax_time_default(traj: &Trajectory) -> Result<ExtractionResult> {
    extract_relax_time(traj, 1e-8)
}
