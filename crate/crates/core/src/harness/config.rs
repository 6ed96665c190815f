//! Run configuration: one TOML document per experiment.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decompose::CutoffPolicy;
use crate::diagnostics::LedgerSchedule;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::solver::SolverConfig;
use crate::SOLITON_ENERGY;

use super::initial::{make_initial_data, InitialData, PreparedData};

/// Default output root when neither the config nor the caller names a directory.
pub const OUTPUT_ROOT_ENV: &str = "WAVEMAP_OUTPUT_ROOT";

/// Degree-1 energies must stay below this when `enforce_regime` is set.
pub const REGIME_ENERGY_LIMIT: f64 = 3.0 * SOLITON_ENERGY;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dr: f64,
    pub r_max: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { dr: 0.01, r_max: 60.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub cfl_factor: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub blowup_gradient_threshold: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            cfl_factor: d.cfl_factor,
            t_end: d.t_end,
            record_every: d.record_every,
            blowup_gradient_threshold: d.blowup_gradient_threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsConfig {
    pub lambdas: Vec<f64>,
    pub offsets: Vec<f64>,
    pub null_cone: bool,
    /// Aperture of the null-cone region `r >= lambda u / (1 - lambda)`.
    pub null_cone_lambda: f64,
    /// Retarded times `u = t - r` sampled by the null-cone ledger. Empty means
    /// eight evenly spaced values in `[0, t_end / 2]`.
    pub null_cone_u: Vec<f64>,
    /// Slack for the pointwise exterior bound.
    pub bound_tolerance: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        let s = LedgerSchedule::default();
        Self {
            lambdas: s.lambdas,
            offsets: s.offsets,
            null_cone: false,
            null_cone_lambda: 0.0,
            null_cone_u: Vec::new(),
            bound_tolerance: 1e-3,
        }
    }
}

impl DiagnosticsConfig {
    pub fn schedule(&self) -> LedgerSchedule {
        LedgerSchedule { lambdas: self.lambdas.clone(), offsets: self.offsets.clone() }
    }

    pub fn u_schedule(&self, t_end: f64) -> Vec<f64> {
        if !self.null_cone_u.is_empty() {
            return self.null_cone_u.clone();
        }
        (0..8).map(|k| k as f64 * t_end / 16.0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecompositionConfig {
    pub enabled: bool,
    pub coefficient: f64,
    pub radius: Option<f64>,
    pub min_tau: f64,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        let p = CutoffPolicy::default();
        Self { enabled: false, coefficient: p.coefficient, radius: p.radius, min_tau: p.min_tau }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Bundle directory; relative paths resolve against the output root.
    pub directory: Option<PathBuf>,
    /// Write `fields.csv` with `(t, r, psi, psi_t)` rows.
    pub fields: bool,
    /// Every `field_stride`-th snapshot goes to `fields.csv`.
    pub field_stride: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: None, fields: true, field_stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub enforce_regime: bool,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub initial_data: InitialData,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub decomposition: DecompositionConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_name() -> String {
    "run".to_string()
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: default_name(),
            seed: 0,
            enforce_regime: false,
            grid: GridConfig::default(),
            solver: SolverSection::default(),
            initial_data: InitialData::default(),
            diagnostics: DiagnosticsConfig::default(),
            decomposition: DecompositionConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn to_config_err(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::InvalidConfig(m),
        other => other,
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Fully resolved TOML; floats use shortest round-trip formatting.
    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::with_extent(self.grid.dr, self.grid.r_max).map_err(to_config_err)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cfl_factor: self.solver.cfl_factor,
            t_end: self.solver.t_end,
            record_every: self.solver.record_every,
            blowup_gradient_threshold: self.solver.blowup_gradient_threshold,
            ledger: self.diagnostics.schedule(),
        }
    }

    pub fn cutoff_policy(&self) -> CutoffPolicy {
        CutoffPolicy {
            coefficient: self.decomposition.coefficient,
            radius: self.decomposition.radius,
            min_tau: self.decomposition.min_tau,
            cfl_factor: self.solver.cfl_factor,
        }
    }

    /// Replaces the value at a dotted key, e.g. `initial_data.amplitude=0.3`.
    /// The value is parsed as a TOML literal, falling back to a bare string.
    pub fn with_override(&self, key: &str, value: &str) -> Result<Self> {
        let mut doc = toml::Value::try_from(self)?;
        let parsed: toml::Value = match toml::from_str::<toml::Table>(&format!("v = {value}")) {
            Ok(mut t) => t.remove("v").expect("key present"),
            Err(_) => toml::Value::String(value.to_string()),
        };
        let parts: Vec<&str> = key.split('.').collect();
        let (leaf, path) = parts.split_last().ok_or_else(|| Error::InvalidConfig("empty override key".into()))?;
        let mut node = &mut doc;
        for p in path {
            node = node
                .as_table_mut()
                .ok_or_else(|| Error::InvalidConfig(format!("{key}: {p} is not a section")))?
                .entry(p.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        }
        node.as_table_mut()
            .ok_or_else(|| Error::InvalidConfig(format!("{key}: parent is not a section")))?
            .insert(leaf.to_string(), parsed);
        doc.try_into().map_err(|e: toml::de::Error| Error::InvalidConfig(format!("override {key}={value}: {e}")))
    }

    /// Builds the initial data and applies every pre-run check: grid and
    /// solver parameters, class pinning, the causal boundary and, when
    /// requested, the energy regime.
    pub fn prepare(&self) -> Result<PreparedData> {
        let grid = self.grid()?;
        self.solver_config().validate().map_err(to_config_err)?;
        if self.solver.t_end > 0.0 && self.decomposition.enabled && self.decomposition.coefficient <= 0.0 {
            return Err(Error::InvalidConfig("decomposition.coefficient must be positive".into()));
        }
        let data = make_initial_data(&self.initial_data, grid, self.seed)?;
        let needed = data.dynamic_support + self.solver.t_end + 5.0 * grid.dr();
        if grid.r_max() < needed {
            return Err(Error::RejectedConfig {
                reason: format!(
                    "r_max = {} is inside the domain of influence; need at least {needed}",
                    grid.r_max()
                ),
                energy: data.energy,
            });
        }
        if self.enforce_regime && data.degree == 1 && !(data.energy < REGIME_ENERGY_LIMIT) {
            return Err(Error::RejectedConfig {
                reason: format!("energy is not below {REGIME_ENERGY_LIMIT}"),
                energy: data.energy,
            });
        }
        Ok(data)
    }
}

/// `$WAVEMAP_OUTPUT_ROOT`, or `runs` in the working directory.
pub fn default_output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"))
}
