use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{decay_trends, interior_cone_violation, null_cone_energies, EnergyLedger};
use crate::error::Result;
use crate::field::ORIGIN_PIN_TOL;

use super::bundle::read_bundle;
use super::config::RunConfig;

pub const VERIFY_REPORT: &str = "verify.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyTolerances {
    pub energy_drift: f64,
    /// Relative to the initial energy.
    pub cone_monotonicity: f64,
    pub density_dominance: f64,
    /// Null-cone checks need stored snapshots at most this many `dr` apart.
    pub max_cone_cadence: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { energy_drift: 1e-4, cone_monotonicity: 1e-4, density_dominance: 1e-12, max_cone_cadence: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub limit: f64,
    /// Not evaluated; `measured` is NaN.
    pub skipped: bool,
}

impl Check {
    fn at_most(name: &str, measured: f64, limit: f64) -> Self {
        Self { name: name.to_string(), passed: measured <= limit, measured, limit, skipped: false }
    }

    fn skipped(name: &str, limit: f64) -> Self {
        Self { name: name.to_string(), passed: true, measured: f64::NAN, limit, skipped: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Invariant suite on a stored bundle; writes `verify.json` next to it.
pub fn verify(dir: &Path, tol: &VerifyTolerances) -> Result<VerifyReport> {
    let b = read_bundle(dir)?;
    let mut checks = Vec::new();

    let standalone = RunConfig::load(&dir.join("config.toml"))?;
    checks.push(Check::at_most("manifest_config_matches_config_toml", (standalone != b.config) as u8 as f64, 0.0));
    let data = b.config.prepare()?;
    checks.push(Check::at_most(
        "manifest_energy_reproduces",
        (data.energy - b.manifest.energy_report.energy).abs(),
        0.0,
    ));

    let history = &b.history;
    if !history.is_empty() {
        let ledger = EnergyLedger::from_history(b.config.diagnostics.schedule(), history);
        checks.push(Check::at_most("relative_energy_drift", ledger.relative_energy_drift(), tol.energy_drift));

        let outer = history[0].psi[history[0].len() - 1];
        let pin = history
            .iter()
            .map(|s| s.psi[0].abs().max((s.psi[s.len() - 1] - outer).abs()))
            .fold(0.0, f64::max);
        checks.push(Check::at_most("class_pinning", pin, ORIGIN_PIN_TOL));

        let dominance = history
            .iter()
            .flat_map(|s| s.densities())
            .map(|d| d.m_flux.abs() - d.e)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most("flux_density_dominated_by_energy_density", dominance, tol.density_dominance));

        let e0 = ledger.rows[0].total_energy.max(f64::MIN_POSITIVE);
        let span = history[history.len() - 1].time - history[0].time;
        if span > 0.0 {
            let interior = interior_cone_violation(history, span);
            checks.push(Check::at_most("interior_cone_energy_nonincreasing", interior / e0, tol.cone_monotonicity));
        }

        if let Some(radius) = data.compact_support {
            let trends = decay_trends(
                history,
                &b.config.diagnostics.schedule(),
                Some(radius),
                b.config.diagnostics.bound_tolerance,
            )?;
            checks.push(Check::at_most("exterior_pointwise_bound_violations", trends.violations.len() as f64, 0.0));
        }

        let dr = history[0].grid.dr();
        let cadence = history.windows(2).map(|w| w[1].time - w[0].time).fold(0.0, f64::max);
        if history.len() >= 2 && span > 0.0 && cadence > tol.max_cone_cadence * dr * (1.0 + 1e-9) {
            checks.push(Check::skipped("null_cone_energy_nonincreasing", tol.cone_monotonicity));
            checks.push(Check::skipped("null_cone_flux_nondecreasing", tol.cone_monotonicity));
        } else if history.len() >= 2 && span > 0.0 {
            let u = b.config.diagnostics.u_schedule(span);
            let nc = null_cone_energies(history, b.config.diagnostics.null_cone_lambda, &u, None)?;
            checks.push(Check::at_most("null_cone_energy_nonincreasing", nc.monotonicity_violation() / e0, tol.cone_monotonicity));
            checks.push(Check::at_most("null_cone_flux_nondecreasing", nc.flux_monotonicity_violation() / e0, tol.cone_monotonicity));
        }
    }

    let report = VerifyReport { checks };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(dir.join(VERIFY_REPORT), text)?;
    Ok(report)
}
