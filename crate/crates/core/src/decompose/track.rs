use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::field::FieldState;
use crate::functionals::{h_norm_sq_of, total_energy};
use crate::soliton::SolitonProfile;
use crate::solver::linear::RadialLaplacian4;
use crate::solver::regular::{from_regular, to_regular};
use crate::solver::rk4::Rk4;
use crate::solver::{estimate_blowup_time, ConcentrationSample, Verdict};

use super::fit::fit_scale;
use super::radiation::{extract_radiation, RadiationExtraction};

/// Cutoff radius used for radiation extraction at the final time `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffPolicy {
    /// `rho = coefficient * sqrt(lambda * tau)` with `lambda` fitted at `tau`.
    pub coefficient: f64,
    /// Fixed radius, overriding the geometric-mean rule.
    pub radius: Option<f64>,
    /// Minimum final time for the radiation to have separated.
    pub min_tau: f64,
    /// CFL factor of the backward linear evolution.
    pub cfl_factor: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self {
            coefficient: 1.0,
            radius: None,
            min_tau: 5.0,
            cfl_factor: 0.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub t: f64,
    pub lambda_fit: f64,
    pub eps_norm_sq: f64,
    pub radiation_energy: f64,
    pub a_energy: f64,
    pub psi_energy: f64,
    /// `lambda / t`; absent at `t = 0`.
    pub lambda_over_t: Option<f64>,
    /// `lambda / (T* - t)` on blow-up runs.
    pub lambda_over_remaining: Option<f64>,
    pub ambiguous: bool,
    pub degenerate: bool,
}

impl DecompositionRecord {
    pub fn eps_norm(&self) -> f64 {
        self.eps_norm_sq.sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub records: Vec<DecompositionRecord>,
    pub tau: f64,
    /// `None` when the final state is not degree 1 (no bubble to remove).
    pub radiation: Option<RadiationExtraction>,
    pub blowup_time: Option<f64>,
    /// Any record was degenerate.
    pub degenerate: bool,
}

impl DecompositionReport {
    pub fn record_at(&self, t: f64) -> Option<&DecompositionRecord> {
        self.records
            .iter()
            .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
    }
}

/// Backward linear evolution of `data` (given at `times.last()`) to every
/// earlier time in `times`. Each gap is integrated with its own step size.
fn propagate_backward(data: &FieldState, times: &[f64], cfl: f64) -> Vec<FieldState> {
    let grid = data.grid;
    let op = RadialLaplacian4::new(grid);
    let mut v = to_regular(&grid, &data.psi);
    let mut w: Vec<f64> = to_regular(&grid, &data.psi_t).iter().map(|x| -x).collect();
    let last = w.len() - 1;
    w[last] = 0.0;
    let mut rk = Rk4::new(v.len());
    let mut out = vec![data.clone(); times.len()];
    for k in (0..times.len() - 1).rev() {
        let gap = times[k + 1] - times[k];
        let m = (gap / (cfl * grid.dr())).ceil().max(1.0) as usize;
        let dt = gap / m as f64;
        for _ in 0..m {
            rk.step(&op, &mut v, &mut w, dt);
        }
        out[k] = FieldState {
            grid,
            psi: from_regular(&grid, &v),
            psi_t: from_regular(&grid, &w).iter().map(|x| -x).collect(),
            time: times[k],
            boundary_value: 0.0,
        };
    }
    out
}

/// Decomposes a recorded nonlinear history. On blow-up histories the records
/// cover the pre-blow-up window and carry `lambda / (T* - t)`.
pub fn track_decomposition(
    history: &[FieldState],
    verdict: Verdict,
    concentration: &[ConcentrationSample],
    policy: &CutoffPolicy,
) -> Result<DecompositionReport> {
    let final_state = history
        .last()
        .ok_or_else(|| invalid_arg("decomposition needs a nonempty history"))?;
    let tau = final_state.time;
    if tau < policy.min_tau {
        return Err(invalid_arg(format!(
            "final time {tau} is below the minimum separation time {}",
            policy.min_tau
        )));
    }
    if history.windows(2).any(|w| w[1].time <= w[0].time) {
        return Err(invalid_arg("snapshot times must increase"));
    }

    let times: Vec<f64> = history.iter().map(|s| s.time).collect();
    let (radiation, linear) = if final_state.degree() == 1 {
        let rho = match policy.radius {
            Some(r) => r,
            None => {
                let bubble = fit_scale(final_state)?;
                policy.coefficient * (bubble.lambda * tau).sqrt()
            }
        };
        let radiation = extract_radiation(final_state, rho)?;
        let linear = propagate_backward(&radiation.data, &times, policy.cfl_factor);
        (Some(radiation), linear)
    } else {
        warn!("final state has degree {}; nothing to extract", final_state.degree());
        let zero = FieldState::zero(final_state.grid);
        let linear = times
            .iter()
            .map(|&t| FieldState { time: t, ..zero.clone() })
            .collect();
        (None, linear)
    };

    let blowup_time = if verdict == Verdict::BlowupDetected {
        Some(estimate_blowup_time(concentration).unwrap_or(tau))
    } else {
        None
    };

    let records = history
        .iter()
        .zip(&linear)
        .map(|(psi, phi)| -> Result<DecompositionRecord> {
            let a = psi.difference(phi)?;
            let fit = fit_scale(&a)?;
            let q = SolitonProfile::new(fit.lambda)?;
            let eps: Vec<f64> = a
                .psi
                .iter()
                .enumerate()
                .map(|(i, x)| x - q.value(a.grid.r(i)))
                .collect();
            let eps_norm_sq = h_norm_sq_of(&a.grid, &eps, Some(&a.psi_t), 0.0, f64::INFINITY)?;
            let t = psi.time;
            Ok(DecompositionRecord {
                t,
                lambda_fit: fit.lambda,
                eps_norm_sq,
                radiation_energy: total_energy(phi, None),
                a_energy: total_energy(&a, None),
                psi_energy: total_energy(psi, None),
                lambda_over_t: (t > 0.0).then(|| fit.lambda / t),
                lambda_over_remaining: blowup_time
                    .and_then(|ts| (ts > t).then(|| fit.lambda / (ts - t))),
                ambiguous: fit.ambiguous,
                degenerate: fit.degenerate,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let degenerate = records.iter().any(|r| r.degenerate);
    Ok(DecompositionReport { records, tau, radiation, blowup_time, degenerate })
}
