//! Method-of-lines evolution in the regular variable `v = psi / r`.
//!
//! Both the wave map equation and its linearization share one RK4 kernel,
//! the fourth-order origin stencil and a frozen (Dirichlet) outer node. The
//! outer node is exact as long as the run validator keeps the boundary
//! outside the domain of influence of the data.

pub mod linear;
pub mod nonlinear;
pub mod regular;
pub mod rk4;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::diagnostics::ledger::{EnergyLedger, LedgerSchedule};
use crate::error::{invalid_arg, Result};
use crate::field::FieldState;

pub use linear::{evolve_linear, linear_rhs};
pub use nonlinear::{evolve, nonlinear_rhs, nonlinearity, step};
pub use regular::substitute_regular;

use regular::{from_regular, to_regular};
use rk4::{RadialOperator, Rk4};

pub const MAX_CFL: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// `dt <= cfl_factor * dr`.
    pub cfl_factor: f64,
    pub t_end: f64,
    /// Steps between recorded snapshots.
    pub record_every: usize,
    /// Blow-up is declared once `max |psi_r| * dr` exceeds this.
    pub blowup_gradient_threshold: f64,
    /// Schedule for the per-snapshot energy ledger.
    pub ledger: LedgerSchedule,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl_factor: 0.4,
            t_end: 10.0,
            record_every: 25,
            blowup_gradient_threshold: 0.5,
            ledger: LedgerSchedule::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= MAX_CFL) {
            return Err(invalid_arg(format!(
                "cfl_factor {} outside (0, {MAX_CFL}]",
                self.cfl_factor
            )));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(invalid_arg(format!("t_end must be finite and >= 0, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(invalid_arg("record_every must be positive"));
        }
        if !(self.blowup_gradient_threshold > 0.0) {
            return Err(invalid_arg("blowup_gradient_threshold must be positive"));
        }
        Ok(())
    }

    /// Total number of steps and the step size. The step count is a multiple
    /// of `record_every` so that `t_end` is always a snapshot time.
    pub fn time_steps(&self, dr: f64) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, 0.0);
        }
        let chunk = self.cfl_factor * dr * self.record_every as f64;
        let chunks = (self.t_end / chunk).ceil().max(1.0) as usize;
        let steps = chunks * self.record_every;
        (steps, self.t_end / steps as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Completed,
    BlowupDetected,
    InstabilityDetected,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Completed => "completed",
            Verdict::BlowupDetected => "blowup_detected",
            Verdict::InstabilityDetected => "instability_detected",
        }
    }
}

/// Gradient concentration at one snapshot; `lambda_est = 1 / max |psi_r|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSample {
    pub time: f64,
    pub max_gradient: f64,
    pub lambda_est: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionOutcome {
    pub verdict: Verdict,
    pub final_state: FieldState,
    pub snapshots: Vec<FieldState>,
    pub ledger: EnergyLedger,
    pub concentration: Vec<ConcentrationSample>,
    pub dt: f64,
    pub steps_taken: usize,
    pub warnings: Vec<String>,
}

impl EvolutionOutcome {
    /// `lambda_est / (T - t)` for a blow-up time estimate `T`; empty unless
    /// blow-up was detected.
    pub fn blowup_ratio_series(&self) -> Vec<(f64, f64)> {
        if self.verdict != Verdict::BlowupDetected {
            return Vec::new();
        }
        let t_star = estimate_blowup_time(&self.concentration).unwrap_or(self.final_state.time);
        self.concentration
            .iter()
            .filter(|c| c.time < t_star)
            .map(|c| (c.time, c.lambda_est / (t_star - c.time)))
            .collect()
    }
}

/// Linear extrapolation of the last three `lambda_est` samples to zero.
pub fn estimate_blowup_time(series: &[ConcentrationSample]) -> Option<f64> {
    if series.len() < 3 {
        return None;
    }
    let tail = &series[series.len() - 3..];
    let n = tail.len() as f64;
    let mt = tail.iter().map(|c| c.time).sum::<f64>() / n;
    let ml = tail.iter().map(|c| c.lambda_est).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for c in tail {
        sxy += (c.time - mt) * (c.lambda_est - ml);
        sxx += (c.time - mt) * (c.time - mt);
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return None;
    }
    let t_star = mt - ml / slope;
    let last = tail[tail.len() - 1].time;
    Some(t_star.max(last))
}

fn concentration_of(state: &FieldState) -> ConcentrationSample {
    let g = state.max_gradient();
    ConcentrationSample {
        time: state.time,
        max_gradient: g,
        lambda_est: if g > 0.0 { 1.0 / g } else { f64::INFINITY },
    }
}

/// Characteristic feature size `(max psi - min psi) / max |psi_r|`.
pub fn feature_size(state: &FieldState) -> Option<f64> {
    let (lo, hi) = state
        .psi
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let g = state.max_gradient();
    if g > 0.0 && hi > lo {
        Some((hi - lo) / g)
    } else {
        None
    }
}

/// Shared driver for both equations.
pub(crate) fn evolve_with<Op: RadialOperator>(
    op: &Op,
    initial: &FieldState,
    cfg: &SolverConfig,
) -> Result<EvolutionOutcome> {
    cfg.validate()?;
    let grid = initial.grid;
    let dr = grid.dr();
    let mut v = substitute_regular(initial)?;
    let mut w = to_regular(&grid, &initial.psi_t);
    let last = w.len() - 1;
    w[last] = 0.0;

    let mut warnings = Vec::new();
    if let Some(size) = feature_size(initial) {
        if size < 8.0 * dr {
            let msg = format!("initial feature size {size:.3e} is below 8 dr = {:.3e}", 8.0 * dr);
            warn!("{msg}");
            warnings.push(msg);
        }
    }

    let (steps, dt) = cfg.time_steps(dr);
    let t0 = initial.time;
    let make_state = |v: &[f64], w: &[f64], t: f64| FieldState {
        grid,
        psi: from_regular(&grid, v),
        psi_t: from_regular(&grid, w),
        time: t,
        boundary_value: initial.boundary_value,
    };

    let first = make_state(&v, &w, t0);
    let mut ledger = EnergyLedger::new(cfg.ledger.clone());
    ledger.push(&first);
    let mut concentration = vec![concentration_of(&first)];
    let mut snapshots = vec![first];
    let mut verdict = Verdict::Completed;
    let mut rk = Rk4::new(v.len());
    let threshold = cfg.blowup_gradient_threshold / dr;
    let mut taken = 0;

    for k in 1..=steps {
        rk.step(op, &mut v, &mut w, dt);
        taken = k;
        let t = t0 + k as f64 * dt;
        let recorded = k % cfg.record_every == 0;
        let finite = v.iter().chain(w.iter()).all(|x| x.is_finite());
        if !finite {
            verdict = Verdict::InstabilityDetected;
            warn!("non-finite field at t = {t}; stopping");
            break;
        }
        let gradient_exhausted = max_regular_gradient(&v, dr) > threshold;
        if recorded || gradient_exhausted {
            let s = make_state(&v, &w, t);
            ledger.push(&s);
            concentration.push(concentration_of(&s));
            snapshots.push(s);
        }
        if gradient_exhausted {
            verdict = Verdict::BlowupDetected;
            break;
        }
    }

    let final_state = snapshots.last().cloned().expect("at least the initial snapshot");
    Ok(EvolutionOutcome {
        verdict,
        final_state,
        snapshots,
        ledger,
        concentration,
        dt,
        steps_taken: taken,
        warnings,
    })
}

/// `max |psi_r|` computed directly from `v` with `psi = r v`.
fn max_regular_gradient(v: &[f64], dr: f64) -> f64 {
    let n = v.len();
    let psi = |i: usize| i as f64 * dr * v[i];
    let inv = 1.0 / (2.0 * dr);
    let mut m = ((-3.0 * psi(0) + 4.0 * psi(1) - psi(2)) * inv).abs();
    for i in 1..n - 1 {
        m = m.max(((psi(i + 1) - psi(i - 1)) * inv).abs());
    }
    m.max(((3.0 * psi(n - 1) - 4.0 * psi(n - 2) + psi(n - 3)) * inv).abs())
}
