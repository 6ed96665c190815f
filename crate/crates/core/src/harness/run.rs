//! Single-run driver: evolve, diagnose, summarize.

use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::decompose::{fit_scale, track_decomposition, DecompositionReport};
use crate::diagnostics::{decay_trends, null_cone_energies, EnergyLedger, NullConeLedger, TrendReport};
use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::solver::{estimate_blowup_time, evolve, ConcentrationSample, EvolutionOutcome, Verdict};

use super::bundle::write_bundle;
use super::config::RunConfig;
use super::initial::PreparedData;

pub const EXIT_COMPLETED: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_INSTABILITY: i32 = 3;
pub const EXIT_REJECTED: i32 = 4;

pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Completed => EXIT_COMPLETED,
        Verdict::BlowupDetected => EXIT_BLOWUP,
        Verdict::InstabilityDetected => EXIT_INSTABILITY,
    }
}

pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::RejectedConfig { .. } | Error::TomlDe(_) => EXIT_REJECTED,
        _ => EXIT_FAILURE,
    }
}

/// Concentration sample plus the bubble scale fitted to the full field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSample {
    pub time: f64,
    pub max_gradient: f64,
    pub lambda_est: f64,
    /// `argmin_lambda || psi - Q_lambda ||_H`; degree-1 snapshots only.
    pub lambda_fit: Option<f64>,
}

/// Everything derived from a recorded history.
#[derive(Debug, Clone)]
pub struct RunDiagnostics {
    pub ledger: EnergyLedger,
    pub scales: Vec<ScaleSample>,
    pub trends: TrendReport,
    pub null_cone: Option<NullConeLedger>,
    pub decomposition: Option<DecompositionReport>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub config: RunConfig,
    pub data: PreparedData,
    pub outcome: EvolutionOutcome,
    pub diagnostics: RunDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub family: String,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub degree: i32,
    pub energy: f64,
    pub relative_energy_drift: f64,
    pub final_time: f64,
    pub dt: f64,
    pub steps_taken: usize,
    pub snapshots: usize,
    pub final_lambda: Option<f64>,
    pub final_eps_norm: Option<f64>,
    pub blowup_time: Option<f64>,
    pub exterior_bound_violations: usize,
    pub null_cone_violation: Option<f64>,
    pub warnings: Vec<String>,
}

fn scale_samples(history: &[FieldState], concentration: &[ConcentrationSample]) -> Vec<ScaleSample> {
    history
        .iter()
        .zip(concentration)
        .map(|(s, c)| ScaleSample {
            time: c.time,
            max_gradient: c.max_gradient,
            lambda_est: c.lambda_est,
            lambda_fit: (s.degree() == 1).then(|| fit_scale(s).ok().map(|f| f.lambda)).flatten(),
        })
        .collect()
}

/// Gradient concentration recomputed from stored snapshots.
pub fn concentration_from(history: &[FieldState]) -> Vec<ConcentrationSample> {
    history
        .iter()
        .map(|s| {
            let g = s.max_gradient();
            ConcentrationSample { time: s.time, max_gradient: g, lambda_est: if g > 0.0 { 1.0 / g } else { f64::INFINITY } }
        })
        .collect()
}

/// Ledger, trends, null-cone energies and decomposition for a history.
/// Failures of the optional stages become warnings.
pub fn diagnose(
    config: &RunConfig,
    data: &PreparedData,
    history: &[FieldState],
    verdict: Verdict,
    concentration: &[ConcentrationSample],
) -> Result<RunDiagnostics> {
    let schedule = config.diagnostics.schedule();
    let mut warnings = Vec::new();
    let ledger = EnergyLedger::from_history(schedule.clone(), history);
    let trends = decay_trends(history, &schedule, data.compact_support, config.diagnostics.bound_tolerance)?;
    warnings.extend(trends.warnings.iter().cloned());

    let t_end = history.last().map(|s| s.time).unwrap_or(0.0);
    let null_cone = if config.diagnostics.null_cone {
        let u = config.diagnostics.u_schedule(t_end);
        match null_cone_energies(history, config.diagnostics.null_cone_lambda, &u, None) {
            Ok(l) => Some(l),
            Err(e) => {
                let msg = format!("null-cone ledger skipped: {e}");
                warn!("{msg}");
                warnings.push(msg);
                None
            }
        }
    } else {
        None
    };

    let decomposition = if config.decomposition.enabled && verdict != Verdict::InstabilityDetected {
        match track_decomposition(history, verdict, concentration, &config.cutoff_policy()) {
            Ok(d) => {
                if let Some(w) = d.radiation.as_ref().and_then(|r| r.warning.clone()) {
                    warnings.push(w);
                }
                Some(d)
            }
            Err(e) => {
                let msg = format!("decomposition skipped: {e}");
                warn!("{msg}");
                warnings.push(msg);
                None
            }
        }
    } else {
        None
    };

    Ok(RunDiagnostics {
        ledger,
        scales: scale_samples(history, concentration),
        trends,
        null_cone,
        decomposition,
        warnings,
    })
}

/// Validates, evolves and diagnoses without touching the disk.
pub fn execute(config: &RunConfig) -> Result<RunArtifacts> {
    let data = config.prepare()?;
    let outcome = evolve(&data.state, &config.solver_config())?;
    let mut diagnostics = diagnose(config, &data, &outcome.snapshots, outcome.verdict, &outcome.concentration)?;
    let mut warnings = outcome.warnings.clone();
    warnings.append(&mut diagnostics.warnings);
    diagnostics.warnings = warnings;
    Ok(RunArtifacts { config: config.clone(), data, outcome, diagnostics })
}

impl RunArtifacts {
    pub fn summary(&self) -> RunSummary {
        let d = &self.diagnostics;
        let last_record = d.decomposition.as_ref().and_then(|r| r.records.last());
        let final_lambda = match last_record {
            Some(r) => Some(r.lambda_fit),
            None => d.scales.last().and_then(|s| s.lambda_fit),
        };
        RunSummary {
            name: self.config.name.clone(),
            family: self.config.initial_data.tag().to_string(),
            verdict: self.outcome.verdict,
            exit_code: exit_code(self.outcome.verdict),
            degree: self.data.degree,
            energy: self.data.energy,
            relative_energy_drift: d.ledger.relative_energy_drift(),
            final_time: self.outcome.final_state.time,
            dt: self.outcome.dt,
            steps_taken: self.outcome.steps_taken,
            snapshots: self.outcome.snapshots.len(),
            final_lambda,
            final_eps_norm: last_record.map(|r| r.eps_norm()),
            blowup_time: (self.outcome.verdict == Verdict::BlowupDetected).then(|| {
                estimate_blowup_time(&self.outcome.concentration).unwrap_or(self.outcome.final_state.time)
            }),
            exterior_bound_violations: d.trends.violations.len(),
            null_cone_violation: d.null_cone.as_ref().map(|l| l.monotonicity_violation()),
            warnings: d.warnings.clone(),
        }
    }
}

/// Executes `config` and writes its bundle to `dir`.
pub fn run(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let artifacts = execute(config)?;
    write_bundle(&artifacts, dir)
}
