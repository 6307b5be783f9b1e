//! Experiment configuration: JSON schema, validation, and conversion into
//! engine objects.

use anyhow::{bail, Context, Result};
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use nhqsim::closed::DensityMatrix;
use nhqsim::linalg::CMat;
use nhqsim::models::{
    build_apt_qubit_general, build_pt_qubit, build_uniform_tensor_sum, QubitHamiltonian,
};
use nhqsim::open::DephasingConfig;

/// Which model family to build. Parameters come from [`ExperimentConfig::parameters`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Two PT qubits, tensor sum of σx + i a σz. Parameter: `a`.
    Pt2,
    /// Two APT qubits, tensor sum of iσx + b σz. Parameter: `b`.
    Apt2,
    /// n_qubits copies of the general APT qubit. Parameters: `n_qubits`,
    /// `b`, `theta`, `kappa`, `s`.
    AptGeneralN,
    /// Explicit matrix from `custom_matrix` (entries as [re, im] pairs).
    Custom,
}

/// Named real parameters of the model.
pub type Parameters = std::collections::BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DephasingSpec {
    /// Local rate on qubit 1 (two-qubit shorthand).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    /// Local rate on qubit 2 (two-qubit shorthand).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
    /// Collective rate (two-qubit shorthand).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma3: Option<f64>,
    /// One local rate per qubit (any register size).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas_local: Option<Vec<f64>>,
    /// Collective rate for L = Σ σz (any register size).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_collective: Option<f64>,
}

impl DephasingSpec {
    pub fn to_engine(&self, n_qubits: usize) -> Result<DephasingConfig> {
        let shorthand = self.gamma1.is_some() || self.gamma2.is_some() || self.gamma3.is_some();
        let general = self.gammas_local.is_some() || self.gamma_collective.is_some();
        if shorthand && general {
            bail!("use either gamma1/gamma2/gamma3 or gammas_local/gamma_collective, not both");
        }
        if shorthand {
            if n_qubits != 2 {
                bail!("gamma1/gamma2/gamma3 are two-qubit shorthand; register has {n_qubits} qubits");
            }
            return Ok(DephasingConfig::two_qubit(
                self.gamma1.unwrap_or(0.0),
                self.gamma2.unwrap_or(0.0),
                self.gamma3.unwrap_or(0.0),
            )?);
        }
        let local = self
            .gammas_local
            .clone()
            .unwrap_or_else(|| vec![0.0; n_qubits]);
        if local.len() != n_qubits {
            bail!("gammas_local has {} entries for {n_qubits} qubits", local.len());
        }
        Ok(DephasingConfig::new(
            local,
            self.gamma_collective.unwrap_or(0.0),
        )?)
    }
}

/// Which dephasing channel a `gamma_values` family (or a γ sweep) drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaChannel {
    /// Collective channel only.
    Collective,
    /// The same rate on every local channel.
    Local,
    /// Local and collective channels all at the same rate.
    All,
}

impl GammaChannel {
    pub fn config(&self, n_qubits: usize, gamma: f64) -> DephasingConfig {
        match self {
            GammaChannel::Collective => DephasingConfig::collective(n_qubits, gamma)
                .expect("nonnegative rate"),
            GammaChannel::Local => {
                DephasingConfig::uniform_local(n_qubits, gamma).expect("nonnegative rate")
            }
            GammaChannel::All => {
                DephasingConfig::new(vec![gamma; n_qubits], gamma).expect("nonnegative rate")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStateKind {
    UpUp,
    DownDown,
    Bell,
    MaximallyMixed,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStates {
    /// Pair evolved for trace-distance outputs.
    pub pair: [InitialStateKind; 2],
    /// State evolved for concurrence / freezing outputs.
    pub single: InitialStateKind,
    /// Matrix for `custom` (entries as [re, im] pairs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_matrix: Option<Vec<Vec<[f64; 2]>>>,
}

impl Default for InitialStates {
    fn default() -> Self {
        Self {
            pair: [InitialStateKind::UpUp, InitialStateKind::DownDown],
            single: InitialStateKind::Bell,
            custom_matrix: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_max: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    TraceDistance,
    Concurrence,
    Regime,
    LiouvillianSpectrum,
    Freezing,
    Extraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Output file prefix.
    pub name: String,
    pub model: ModelKind,
    #[serde(default)]
    pub parameters: Parameters,
    /// Matrix for `model = custom` (entries as [re, im] pairs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub dephasing: DephasingSpec,
    #[serde(default)]
    pub initial_states: InitialStates,
    pub time: TimeSpec,
    pub outputs: Vec<OutputKind>,
    /// Optional family of dephasing strengths: trajectory/spectrum/freezing
    /// outputs are produced once per value, driving `gamma_channel`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_channel: Option<GammaChannel>,
}

fn matrix_from_entries(entries: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        bail!("custom matrix must be square and nonempty");
    }
    let mut m: CMat = Array2::zeros((n, n));
    for (i, row) in entries.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[[i, j]] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).context("parsing experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time.dt > 0.0 && self.time.dt < self.time.t_max) {
            bail!(
                "time grid requires 0 < dt < t_max (dt = {}, t_max = {})",
                self.time.dt,
                self.time.t_max
            );
        }
        if self.gamma_values.is_some() && self.gamma_channel.is_none() {
            bail!("gamma_values requires gamma_channel");
        }
        if let Some(values) = &self.gamma_values {
            if values.is_empty() || values.iter().any(|&g| g < 0.0 || !g.is_finite()) {
                bail!("gamma_values must be nonempty and nonnegative");
            }
        }
        self.param_value()?;
        Ok(())
    }

    fn param_value(&self) -> Result<f64> {
        match self.model {
            ModelKind::Pt2 => self
                .parameters
                .get("a")
                .copied()
                .context("pt2 requires parameter `a`"),
            ModelKind::Apt2 => self
                .parameters
                .get("b")
                .copied()
                .context("apt2 requires parameter `b`"),
            ModelKind::AptGeneralN => self
                .parameters
                .get("b")
                .copied()
                .context("apt_general_n requires parameter `b`"),
            ModelKind::Custom => Ok(0.0),
        }
    }

    /// Whether the model sits within 1e-3 of an exceptional point (a = 1 or
    /// b = 1); spectral expansions are unreliable there.
    pub fn ep_adjacent(&self) -> bool {
        match self.model {
            ModelKind::Pt2 | ModelKind::Apt2 | ModelKind::AptGeneralN => self
                .param_value()
                .map(|v| (v - 1.0).abs() < 1e-3)
                .unwrap_or(false),
            ModelKind::Custom => false,
        }
    }

    pub fn build_hamiltonian(&self) -> Result<QubitHamiltonian> {
        match self.model {
            ModelKind::Pt2 => {
                let a = self.param_value()?;
                Ok(build_uniform_tensor_sum(&build_pt_qubit(a), 2)?)
            }
            ModelKind::Apt2 => {
                let b = self.param_value()?;
                Ok(build_uniform_tensor_sum(
                    &build_apt_qubit_general(b, 0.0, 1.0, 0.0),
                    2,
                )?)
            }
            ModelKind::AptGeneralN => {
                let n = *self.parameters.get("n_qubits").unwrap_or(&1.0);
                if n < 1.0 || n.fract() != 0.0 {
                    bail!("n_qubits must be a positive integer, got {n}");
                }
                let b = self.param_value()?;
                let theta = *self.parameters.get("theta").unwrap_or(&0.0);
                let kappa = *self.parameters.get("kappa").unwrap_or(&1.0);
                let s = *self.parameters.get("s").unwrap_or(&0.0);
                Ok(build_uniform_tensor_sum(
                    &build_apt_qubit_general(b, theta, kappa, s),
                    n as usize,
                )?)
            }
            ModelKind::Custom => {
                let entries = self
                    .custom_matrix
                    .as_ref()
                    .context("model = custom requires custom_matrix")?;
                Ok(QubitHamiltonian::from_matrix(matrix_from_entries(entries)?)?)
            }
        }
    }

    pub fn build_state(&self, kind: InitialStateKind, n_qubits: usize) -> Result<DensityMatrix> {
        Ok(match kind {
            InitialStateKind::UpUp => DensityMatrix::all_up(n_qubits),
            InitialStateKind::DownDown => DensityMatrix::all_down(n_qubits),
            InitialStateKind::Bell => {
                if n_qubits != 2 {
                    bail!("bell initial state requires a two-qubit register");
                }
                DensityMatrix::bell_psi_plus()
            }
            InitialStateKind::MaximallyMixed => DensityMatrix::maximally_mixed(n_qubits),
            InitialStateKind::Custom => {
                let entries = self
                    .initial_states
                    .custom_matrix
                    .as_ref()
                    .context("custom initial state requires initial_states.custom_matrix")?;
                DensityMatrix::from_matrix(matrix_from_entries(entries)?)?
            }
        })
    }

    pub fn time_grid(&self) -> Vec<f64> {
        let n = (self.time.t_max / self.time.dt).round() as usize;
        (0..=n).map(|k| k as f64 * self.time.dt).collect()
    }
}
