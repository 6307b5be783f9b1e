//! Experiment orchestration: configs in, result bundles out.
//!
//! Everything here is deterministic for a given config: no randomness, fixed
//! iteration orders, and sweep points merged in parameter order regardless
//! of which worker finishes first.

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use nhqsim::closed::{classify_regime_default, propagate_closed_grid, DensityMatrix, Regime};
use nhqsim::metrics::{
    extract_period, extract_relax_time_default, ExtractionKind, Trajectory,
};
use nhqsim::models::QubitHamiltonian;
use nhqsim::open::{
    freezing_diagnostic, liouvillian_spectrum, propagate_open_grid, relaxation_time_open,
    spectrum_sweep, DephasingConfig,
};

use crate::config::{ExperimentConfig, GammaChannel, OutputKind};

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryOut {
    /// File-name component: `<metric>` or `<metric>_g<gamma>`.
    pub series: String,
    pub metric: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractionOut {
    pub series: String,
    pub kind: String,
    pub value: f64,
    pub fit_quality: f64,
    pub window: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegimeOut {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relax_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRowOut {
    pub gamma: f64,
    pub gap: f64,
    pub real_parts: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreezingOut {
    pub gamma: f64,
    pub diagnostic: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub output: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub engine_version: String,
    pub timestamp_unix: u64,
    pub warnings: Vec<String>,
}

/// Everything one experiment produced; mirrors the CSV output with
/// full-precision numbers.
#[derive(Debug, Clone, Serialize)]
pub struct ResultBundle {
    pub config: ExperimentConfig,
    pub trajectories: Vec<TrajectoryOut>,
    pub extractions: Vec<ExtractionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeOut>,
    pub spectrum: Vec<SpectrumRowOut>,
    pub freezing: Vec<FreezingOut>,
    pub errors: Vec<ErrorRecord>,
    pub provenance: Provenance,
}

impl ResultBundle {
    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty() || self.spectrum.iter().any(|r| r.error.is_some())
    }
}

/// Format a gamma for file-name suffixes (shortest round-trip form).
fn gamma_tag(g: f64) -> String {
    format!("{g}")
}

/// One dephasing configuration per family member; `None` marks the base
/// (non-family) configuration.
fn dephasing_family(
    cfg: &ExperimentConfig,
    n_qubits: usize,
) -> Result<Vec<(Option<f64>, DephasingConfig)>> {
    match (&cfg.gamma_values, cfg.gamma_channel) {
        (Some(values), Some(channel)) => Ok(values
            .iter()
            .map(|&g| (Some(g), channel.config(n_qubits, g)))
            .collect()),
        _ => Ok(vec![(None, cfg.dephasing.to_engine(n_qubits)?)]),
    }
}

fn evolve_states(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    rho0: &DensityMatrix,
    grid: &[f64],
) -> nhqsim::Result<Vec<DensityMatrix>> {
    let closed = deph.jump_operators().is_empty();
    if closed {
        propagate_closed_grid(h, rho0, grid)
    } else {
        propagate_open_grid(h, deph, rho0, grid)
    }
}

/// Run one experiment; per-output failures are recorded as structured
/// errors without aborting the remaining outputs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultBundle> {
    cfg.validate()?;
    let h = cfg.build_hamiltonian()?;
    let grid = cfg.time_grid();
    let family = dephasing_family(cfg, h.n_qubits)?;

    let mut warnings = Vec::new();
    if cfg.ep_adjacent() {
        warnings.push(
            "model parameter within 1e-3 of the exceptional point; spectral outputs may fail"
                .to_string(),
        );
    }

    let mut trajectories = Vec::new();
    let mut extractions = Vec::new();
    let mut regime_out = None;
    let mut spectrum = Vec::new();
    let mut freezing = Vec::new();
    let mut errors = Vec::new();

    let closed_regime = classify_regime_default(&h);

    let want = |kind: OutputKind| cfg.outputs.contains(&kind);

    // Trajectory + extraction outputs, one series per family member.
    let want_dist = want(OutputKind::TraceDistance);
    let want_conc = want(OutputKind::Concurrence);
    let want_extraction = want(OutputKind::Extraction);
    if want_dist || want_conc || want_extraction {
        for (gamma, deph) in &family {
            let suffix = gamma.map(|g| format!("_g{}", gamma_tag(g))).unwrap_or_default();
            // Prediction for relaxation extractions: the Liouvillian gap.
            let tau_prediction = || -> Option<f64> {
                liouvillian_spectrum(&h, deph)
                    .ok()
                    .and_then(|s| relaxation_time_open(&s).ok())
            };

            let mut handle = |metric: &str, traj: nhqsim::Result<Trajectory>| {
                let series = format!("{metric}{suffix}");
                match traj {
                    Ok(traj) => {
                        if want_extraction {
                            let (result, predicted) = match closed_regime {
                                Ok(Regime::PureOscillation { period })
                                    if gamma.map(|g| g == 0.0).unwrap_or(true) =>
                                {
                                    (extract_period(&traj), Some(period))
                                }
                                _ => (extract_relax_time_default(&traj), tau_prediction()),
                            };
                            match result {
                                Ok(r) => {
                                    let rel_err = predicted
                                        .map(|p| (r.value - p).abs() / p.abs().max(1e-300));
                                    extractions.push(ExtractionOut {
                                        series: series.clone(),
                                        kind: match r.kind {
                                            ExtractionKind::Period => "period".into(),
                                            ExtractionKind::RelaxTime => "relax_time".into(),
                                        },
                                        value: r.value,
                                        fit_quality: r.fit_quality,
                                        window: [r.window.0, r.window.1],
                                        predicted,
                                        rel_err,
                                    });
                                }
                                Err(e) => errors.push(ErrorRecord {
                                    output: format!("extraction:{series}"),
                                    message: e.to_string(),
                                }),
                            }
                        }
                        trajectories.push(TrajectoryOut {
                            series,
                            metric: metric.to_string(),
                            gamma: *gamma,
                            times: traj.times().to_vec(),
                            values: traj.values().to_vec(),
                        });
                    }
                    Err(e) => errors.push(ErrorRecord {
                        output: format!("{metric}{suffix}"),
                        message: e.to_string(),
                    }),
                }
            };

            if want_dist || (want_extraction && !want_conc) {
                let pair = &cfg.initial_states.pair;
                let traj = cfg
                    .build_state(pair[0], h.n_qubits)
                    .and_then(|r1| Ok((r1, cfg.build_state(pair[1], h.n_qubits)?)))
                    .map_err(|e| nhqsim::Error::InvalidDensity(e.to_string()))
                    .and_then(|(r1, r2)| {
                        let s1 = evolve_states(&h, deph, &r1, &grid)?;
                        let s2 = evolve_states(&h, deph, &r2, &grid)?;
                        Trajectory::trace_distance_series(&grid, &s1, &s2)
                    });
                handle("trace_distance", traj);
            }
            if want_conc {
                let traj = cfg
                    .build_state(cfg.initial_states.single, h.n_qubits)
                    .map_err(|e| nhqsim::Error::InvalidDensity(e.to_string()))
                    .and_then(|rho| {
                        let states = evolve_states(&h, deph, &rho, &grid)?;
                        Trajectory::concurrence_series(&grid, &states)
                    });
                handle("concurrence", traj);
            }
        }
    }

    if want(OutputKind::Regime) {
        match &closed_regime {
            Ok(r) => {
                regime_out = Some(RegimeOut {
                    kind: match r {
                        Regime::DampedOscillation { .. } => "damped_oscillation".into(),
                        Regime::PureOscillation { .. } => "pure_oscillation".into(),
                        Regime::PureDecay { .. } => "pure_decay".into(),
                    },
                    period: r.period(),
                    relax_rate: r.relax_rate(),
                })
            }
            Err(e) => errors.push(ErrorRecord {
                output: "regime".into(),
                message: e.to_string(),
            }),
        }
    }

    if want(OutputKind::LiouvillianSpectrum) {
        let channel = cfg.gamma_channel.unwrap_or(GammaChannel::Local);
        let gammas: Vec<f64> = match &cfg.gamma_values {
            Some(values) => values.clone(),
            None => {
                // Single row at the configured pattern's largest rate.
                let deph = cfg.dephasing.to_engine(h.n_qubits)?;
                let top = deph
                    .local_rates()
                    .iter()
                    .copied()
                    .fold(deph.collective_rate(), f64::max);
                vec![top]
            }
        };
        let (rows, _summary) = spectrum_sweep(&h, |g| channel.config(h.n_qubits, g), &gammas);
        for r in rows {
            spectrum.push(SpectrumRowOut {
                gamma: r.gamma,
                gap: r.gap,
                real_parts: r.real_parts,
                error: r.error,
            });
        }
    }

    if want(OutputKind::Freezing) {
        match cfg.build_state(cfg.initial_states.single, h.n_qubits) {
            Ok(rho) => {
                for (gamma, deph) in &family {
                    match freezing_diagnostic(&h, deph, &rho) {
                        Ok(d) => freezing.push(FreezingOut {
                            gamma: gamma.unwrap_or(deph.collective_rate()),
                            diagnostic: d,
                        }),
                        Err(e) => errors.push(ErrorRecord {
                            output: "freezing".into(),
                            message: e.to_string(),
                        }),
                    }
                }
            }
            Err(e) => errors.push(ErrorRecord {
                output: "freezing".into(),
                message: e.to_string(),
            }),
        }
    }

    Ok(ResultBundle {
        config: cfg.clone(),
        trajectories,
        extractions,
        regime: regime_out,
        spectrum,
        freezing,
        errors,
        provenance: Provenance {
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            warnings,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub param: f64,
    pub measured: f64,
    pub predicted: f64,
    pub rel_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn apply_param(base: &ExperimentConfig, param: &str, value: f64) -> Result<ExperimentConfig> {
    let mut cfg = base.clone();
    match param {
        "a" | "b" | "theta" | "kappa" | "s" | "n_qubits" => {
            cfg.parameters.insert(param.to_string(), value);
        }
        "gamma1" => cfg.dephasing.gamma1 = Some(value),
        "gamma2" => cfg.dephasing.gamma2 = Some(value),
        "gamma3" => cfg.dephasing.gamma3 = Some(value),
        "gamma_collective" => cfg.dephasing.gamma_collective = Some(value),
        "gamma_local" => {
            let n = base.build_hamiltonian()?.n_qubits;
            cfg.dephasing.gammas_local = Some(vec![value; n]);
        }
        other => bail!("unknown sweep parameter `{other}`"),
    }
    cfg.name = format!("{}_{}{}", base.name, param, value);
    Ok(cfg)
}

fn analytic_prediction(cfg: &ExperimentConfig, param: &str) -> Option<f64> {
    let h = cfg.build_hamiltonian().ok()?;
    if param.starts_with("gamma") {
        let deph = cfg.dephasing.to_engine(h.n_qubits).ok()?;
        let spec = liouvillian_spectrum(&h, &deph).ok()?;
        return relaxation_time_open(&spec).ok();
    }
    match classify_regime_default(&h).ok()? {
        Regime::PureOscillation { period } => Some(period),
        Regime::PureDecay { relax_rate } => Some(1.0 / relax_rate),
        Regime::DampedOscillation { relax_rate, .. } => Some(1.0 / relax_rate),
    }
}

/// Sweep one parameter; per-point failures land in the summary row and the
/// sweep continues. Points run in parallel, results are merged in order.
pub fn run_sweep(
    base: &ExperimentConfig,
    param: &str,
    values: &[f64],
) -> Result<(Vec<ResultBundle>, Vec<SummaryRow>)> {
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    let configs: Vec<ExperimentConfig> = values
        .iter()
        .map(|&v| apply_param(base, param, v))
        .collect::<Result<_>>()?;

    let outcomes: Vec<(ExperimentConfig, Result<ResultBundle>)> = configs
        .into_par_iter()
        .map(|cfg| {
            let bundle = run_experiment(&cfg);
            (cfg, bundle)
        })
        .collect();

    let mut bundles = Vec::new();
    let mut summary = Vec::new();
    for (&value, (cfg, outcome)) in values.iter().zip(outcomes) {
        match outcome {
            Ok(bundle) => {
                let measured = bundle
                    .extractions
                    .iter()
                    .find(|e| e.series.starts_with("trace_distance"))
                    .or_else(|| bundle.extractions.first())
                    .map(|e| e.value);
                let predicted = analytic_prediction(&cfg, param);
                let row = match (measured, predicted) {
                    (Some(m), Some(p)) => SummaryRow {
                        param: value,
                        measured: m,
                        predicted: p,
                        rel_err: (m - p).abs() / p.abs().max(1e-300),
                        error: None,
                    },
                    _ => SummaryRow {
                        param: value,
                        measured: measured.unwrap_or(f64::NAN),
                        predicted: predicted.unwrap_or(f64::NAN),
                        rel_err: f64::NAN,
                        error: bundle
                            .errors
                            .first()
                            .map(|e| e.message.clone())
                            .or(Some("missing extraction or prediction".into())),
                    },
                };
                summary.push(row);
                bundles.push(bundle);
            }
            Err(e) => summary.push(SummaryRow {
                param: value,
                measured: f64::NAN,
                predicted: f64::NAN,
                rel_err: f64::NAN,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok((bundles, summary))
}
