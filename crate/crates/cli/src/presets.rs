//! Canned experiment configurations, one per reference figure panel.
//!
//! Naming: fig1* / fig2* are the closed PT / APT benchmarks, fig3* the
//! dephasing-damped oscillation comparisons, fig4a-c the APT slow-down set
//! (trace distance; fig4c is the relaxation-time benchmark against the
//! Liouvillian gap), fig4d-g the PT-broken acceleration set, fig5* the
//! concurrence dephasing-type sensitivity, and fig6* the single-qubit
//! Liouvillian-spectrum scans.

use crate::config::{
    DephasingSpec, ExperimentConfig, GammaChannel, InitialStates, ModelKind, OutputKind,
    Parameters, TimeSpec,
};

/// A preset is one experiment, one sweep, or a group of either.
pub enum PresetRun {
    Single(ExperimentConfig),
    Sweep {
        base: ExperimentConfig,
        param: String,
        values: Vec<f64>,
    },
    Group(Vec<PresetRun>),
}

fn params(pairs: &[(&str, f64)]) -> Parameters {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn config(
    name: &str,
    model: ModelKind,
    parameters: Parameters,
    t_max: f64,
    dt: f64,
    outputs: Vec<OutputKind>,
) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        model,
        parameters,
        custom_matrix: None,
        dephasing: DephasingSpec::default(),
        initial_states: InitialStates::default(),
        time: TimeSpec { t_max, dt },
        outputs,
        gamma_values: None,
        gamma_channel: None,
    }
}

fn with_family(
    mut cfg: ExperimentConfig,
    channel: GammaChannel,
    values: &[f64],
) -> ExperimentConfig {
    cfg.gamma_values = Some(values.to_vec());
    cfg.gamma_channel = Some(channel);
    cfg
}

const TRAJ: &[OutputKind] = &[
    OutputKind::TraceDistance,
    OutputKind::Concurrence,
    OutputKind::Regime,
    OutputKind::Extraction,
];

/// (name, description) of every preset.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("fig1a", "closed PT pair, a=0.4 (unbroken): oscillating trace distance and concurrence"),
        ("fig1b", "closed PT pair, a=2 (broken): relaxing trace distance and concurrence"),
        ("fig1c", "closed PT period benchmark: sweep a in {0.2,0.4,0.6,0.8} against pi/sqrt(1-a^2)"),
        ("fig1d", "closed PT relaxation benchmark: sweep a in {1.25..3} against 1/(2 sqrt(a^2-1))"),
        ("fig2a", "closed APT pair, b=0.4 (unbroken): relaxing metrics"),
        ("fig2b", "closed APT pair, b=2 (broken): oscillating metrics"),
        ("fig2c", "closed APT relaxation benchmark: sweep b in {0.1..0.9} against 1/(2 sqrt(1-b^2))"),
        ("fig2d", "closed APT period benchmark: sweep b in {1.25..2.5} against pi/sqrt(b^2-1)"),
        ("fig3a", "PT a=0.75 oscillation with and without weak collective dephasing (gamma 0, 0.01)"),
        ("fig3b", "APT b=1.25 oscillation with and without weak collective dephasing"),
        ("fig4a", "APT b=0.5 trace distance under collective dephasing family (slow-down)"),
        ("fig4b", "APT b=0.5 trace distance under local dephasing family (slow-down)"),
        ("fig4c", "APT b=0.5 relaxation times vs gamma, benchmarked against 1/(Liouvillian gap)"),
        ("fig4d", "PT a=1.25 trace distance under collective dephasing family (acceleration)"),
        ("fig4e", "PT a=1.25 trace distance under local dephasing family (acceleration)"),
        ("fig4f", "PT a=1.25 concurrence under collective dephasing family (acceleration)"),
        ("fig4g", "PT a=1.25 concurrence under local dephasing family (acceleration)"),
        ("fig5a", "APT b=0.5 concurrence under collective dephasing family (protected)"),
        ("fig5b", "APT b=0.5 concurrence under local dephasing family (accelerated decay)"),
        ("fig6a", "Liouvillian spectrum vs gamma: Hermitian sigma_x + 0.5 sigma_z"),
        ("fig6b", "Liouvillian spectrum vs gamma: Hermitian sigma_x"),
        ("fig6c", "Liouvillian spectrum vs gamma: APT i sigma_x + 0.5 sigma_z"),
        ("fig6d", "Liouvillian spectrum vs gamma: PT sigma_x + 0.5i sigma_z"),
        ("fig6", "all four single-qubit Liouvillian spectrum scans"),
    ]
}

fn spectrum_scan(name: &str, model: ModelKind, parameters: Parameters) -> ExperimentConfig {
    let gammas: Vec<f64> = (0..=80).map(|k| k as f64 * 0.25).collect();
    with_family(
        config(
            name,
            model,
            parameters,
            1.0,
            0.1,
            vec![OutputKind::LiouvillianSpectrum],
        ),
        GammaChannel::Local,
        &gammas,
    )
}

/// Build a preset by name.
pub fn build(name: &str) -> Option<PresetRun> {
    let slow_down_gammas = [0.0, 0.1, 0.3, 1.0];
    let acceleration_gammas = [0.0, 0.05, 0.1, 0.2];
    Some(match name {
        "fig1a" => PresetRun::Single(config(
            "fig1a",
            ModelKind::Pt2,
            params(&[("a", 0.4)]),
            20.0,
            0.01,
            TRAJ.to_vec(),
        )),
        "fig1b" => PresetRun::Single(config(
            "fig1b",
            ModelKind::Pt2,
            params(&[("a", 2.0)]),
            15.0,
            0.005,
            TRAJ.to_vec(),
        )),
        "fig1c" => PresetRun::Sweep {
            base: config(
                "fig1c",
                ModelKind::Pt2,
                params(&[("a", 0.4)]),
                24.0,
                0.01,
                vec![OutputKind::TraceDistance, OutputKind::Extraction],
            ),
            param: "a".into(),
            values: vec![0.2, 0.4, 0.6, 0.8],
        },
        "fig1d" => PresetRun::Sweep {
            base: config(
                "fig1d",
                ModelKind::Pt2,
                params(&[("a", 2.0)]),
                15.0,
                0.005,
                vec![OutputKind::TraceDistance, OutputKind::Extraction],
            ),
            param: "a".into(),
            values: vec![1.25, 1.5, 2.0, 2.5, 3.0],
        },
        "fig2a" => PresetRun::Single(config(
            "fig2a",
            ModelKind::Apt2,
            params(&[("b", 0.4)]),
            15.0,
            0.005,
            TRAJ.to_vec(),
        )),
        "fig2b" => PresetRun::Single(config(
            "fig2b",
            ModelKind::Apt2,
            params(&[("b", 2.0)]),
            20.0,
            0.01,
            TRAJ.to_vec(),
        )),
        "fig2c" => PresetRun::Sweep {
            base: config(
                "fig2c",
                ModelKind::Apt2,
                params(&[("b", 0.5)]),
                25.0,
                0.005,
                vec![OutputKind::TraceDistance, OutputKind::Extraction],
            ),
            param: "b".into(),
            values: vec![0.1, 0.3, 0.5, 0.7, 0.9],
        },
        "fig2d" => PresetRun::Sweep {
            base: config(
                "fig2d",
                ModelKind::Apt2,
                params(&[("b", 2.0)]),
                24.0,
                0.01,
                vec![OutputKind::TraceDistance, OutputKind::Extraction],
            ),
            param: "b".into(),
            values: vec![1.25, 1.5, 2.0, 2.5],
        },
        "fig3a" => PresetRun::Single(with_family(
            config(
                "fig3a",
                ModelKind::Pt2,
                params(&[("a", 0.75)]),
                30.0,
                0.01,
                vec![OutputKind::TraceDistance],
            ),
            GammaChannel::Collective,
            &[0.0, 0.01],
        )),
        "fig3b" => PresetRun::Single(with_family(
            config(
                "fig3b",
                ModelKind::Apt2,
                params(&[("b", 1.25)]),
                30.0,
                0.01,
                vec![OutputKind::TraceDistance],
            ),
            GammaChannel::Collective,
            &[0.0, 0.01],
        )),
        "fig4a" => PresetRun::Single(with_family(
            config(
                "fig4a",
                ModelKind::Apt2,
                params(&[("b", 0.5)]),
                25.0,
                0.005,
                vec![OutputKind::TraceDistance],
            ),
            GammaChannel::Collective,
            &slow_down_gammas,
        )),
        "fig4b" => PresetRun::Single(with_family(
            config(
                "fig4b",
                ModelKind::Apt2,
                params(&[("b", 0.5)]),
                25.0,
                0.005,
                vec![OutputKind::TraceDistance],
            ),
            GammaChannel::Local,
            &slow_down_gammas,
        )),
        "fig4c" => PresetRun::Group(vec![
            PresetRun::Sweep {
                base: config(
                    "fig4c_collective",
                    ModelKind::Apt2,
                    params(&[("b", 0.5)]),
                    25.0,
                    0.005,
                    vec![OutputKind::TraceDistance, OutputKind::Extraction],
                ),
                param: "gamma3".into(),
                values: vec![0.1, 0.3, 1.0],
            },
            PresetRun::Sweep {
                base: config(
                    "fig4c_local",
                    ModelKind::Apt2,
                    params(&[("b", 0.5)]),
                    25.0,
                    0.005,
                    vec![OutputKind::TraceDistance, OutputKind::Extraction],
                ),
                param: "gamma_local".into(),
                values: vec![0.1, 0.3, 1.0],
            },
        ]),
        "fig4d" => PresetRun::Single(with_family(
            config(
                "fig4d",
                ModelKind::Pt2,
                params(&[("a", 1.25)]),
                15.0,
                0.005,
                vec![OutputKind::TraceDistance],
            ),
            GammaChannel::Collective,
            &acceleration_gammas,
        )),
        "fig4e" => PresetRun::Single(with_family(
            config(
                "fig4e",
                ModelKind::Pt2,
                params(&[("a", 1.25)]),
                15.0,
                0.005,
                vec![OutputKind::TraceDistance],
            ),
            GammaChannel::Local,
            &acceleration_gammas,
        )),
        "fig4f" => PresetRun::Single(with_family(
            config(
                "fig4f",
                ModelKind::Pt2,
                params(&[("a", 1.25)]),
                15.0,
                0.005,
                vec![OutputKind::Concurrence],
            ),
            GammaChannel::Collective,
            &acceleration_gammas,
        )),
        "fig4g" => PresetRun::Single(with_family(
            config(
                "fig4g",
                ModelKind::Pt2,
                params(&[("a", 1.25)]),
                15.0,
                0.005,
                vec![OutputKind::Concurrence],
            ),
            GammaChannel::Local,
            &acceleration_gammas,
        )),
        "fig5a" => PresetRun::Single(with_family(
            config(
                "fig5a",
                ModelKind::Apt2,
                params(&[("b", 0.5)]),
                25.0,
                0.005,
                vec![OutputKind::Concurrence],
            ),
            GammaChannel::Collective,
            &slow_down_gammas,
        )),
        "fig5b" => PresetRun::Single(with_family(
            config(
                "fig5b",
                ModelKind::Apt2,
                params(&[("b", 0.5)]),
                25.0,
                0.005,
                vec![OutputKind::Concurrence],
            ),
            GammaChannel::Local,
            &slow_down_gammas,
        )),
        "fig6a" => {
            let mut cfg = spectrum_scan("fig6a", ModelKind::Custom, Parameters::new());
            cfg.custom_matrix = Some(vec![
                vec![[0.5, 0.0], [1.0, 0.0]],
                vec![[1.0, 0.0], [-0.5, 0.0]],
            ]);
            PresetRun::Single(cfg)
        }
        "fig6b" => {
            let mut cfg = spectrum_scan("fig6b", ModelKind::Custom, Parameters::new());
            cfg.custom_matrix = Some(vec![
                vec![[0.0, 0.0], [1.0, 0.0]],
                vec![[1.0, 0.0], [0.0, 0.0]],
            ]);
            PresetRun::Single(cfg)
        }
        "fig6c" => PresetRun::Single(spectrum_scan(
            "fig6c",
            ModelKind::AptGeneralN,
            params(&[("n_qubits", 1.0), ("b", 0.5), ("theta", 0.0), ("kappa", 1.0), ("s", 0.0)]),
        )),
        "fig6d" => {
            let mut cfg = spectrum_scan("fig6d", ModelKind::Custom, Parameters::new());
            cfg.custom_matrix = Some(vec![
                vec![[0.0, 0.5], [1.0, 0.0]],
                vec![[1.0, 0.0], [0.0, -0.5]],
            ]);
            PresetRun::Single(cfg)
        }
        "fig6" => PresetRun::Group(
            ["fig6a", "fig6b", "fig6c", "fig6d"]
                .iter()
                .map(|n| build(n).expect("fig6 panels exist"))
                .collect(),
        ),
        _ => return None,
    })
}
