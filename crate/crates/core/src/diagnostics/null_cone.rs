//! Energies on outgoing null cones `u = t - r` and fluxes through the
//! ingoing cone `v = t + r = v_max`, truncated to the recorded space-time
//! region. With
//!
//! * `E_lambda(u) = int_{(1+lambda) u / (1-lambda)}^{v_max} alpha^2(u, v) dv`
//! * `F(u0, u1) = int_{u0}^{u1} beta^2(u, v_max) du`
//!
//! integrating the energy identity gives `F(u0, u1) = E_0(u0) - E_0(u1)`
//! exactly (up to quadrature), so `E_0` is nonincreasing in `u`.

use log::warn;

use crate::error::{invalid_arg, Result};
use crate::field::FieldState;
use crate::functionals::integrate;
use crate::grid::RadialGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSample {
    pub u: f64,
    pub energy: f64,
    /// The cone left the recorded region before reaching `v_max`.
    pub partial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxRecord {
    pub u0: f64,
    pub u1: f64,
    pub flux: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullConeLedger {
    pub lambda: f64,
    pub v_max: f64,
    pub samples: Vec<ConeSample>,
    /// Fluxes between consecutive scheduled cones.
    pub fluxes: Vec<FluxRecord>,
}

impl NullConeLedger {
    /// Largest increase `E(u_{k+1}) - E(u_k)` over consecutive complete samples.
    pub fn monotonicity_violation(&self) -> f64 {
        self.samples
            .windows(2)
            .filter(|w| !w[0].partial && !w[1].partial)
            .map(|w| w[1].energy - w[0].energy)
            .fold(0.0, f64::max)
    }

    /// `F(u_0, u_k)` for every scheduled `u_k`, accumulated from the first cone.
    pub fn cumulative_flux(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for f in &self.fluxes {
            acc += f.flux;
            out.push(acc);
        }
        out
    }

    /// Largest decrease along the cumulative flux sequence.
    pub fn flux_monotonicity_violation(&self) -> f64 {
        self.cumulative_flux()
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }

    /// `max |F(u_k, u_{k+1}) - (E(u_k) - E(u_{k+1}))|`.
    pub fn identity_defect(&self) -> f64 {
        self.fluxes
            .iter()
            .zip(self.samples.windows(2))
            .map(|(f, w)| (f.flux - (w[0].energy - w[1].energy)).abs())
            .fold(0.0, f64::max)
    }
}

/// Linear-in-time interpolation of per-snapshot node fields.
struct Interpolated<'a> {
    times: Vec<f64>,
    fields: &'a [Vec<f64>],
}

impl Interpolated<'_> {
    fn at(&self, t: f64, i: usize) -> f64 {
        let n = self.times.len();
        let t = t.clamp(self.times[0], self.times[n - 1]);
        let k = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(k) => return self.fields[k][i],
            Err(k) => k.clamp(1, n - 1),
        };
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        self.fields[k - 1][i] * (1.0 - w) + self.fields[k][i] * w
    }
}

fn null_densities(history: &[FieldState]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    history
        .iter()
        .map(|s| {
            let d = s.densities();
            let a = d.iter().enumerate().map(|(i, x)| x.alpha_sq(s.grid.r(i))).collect();
            let b = d.iter().enumerate().map(|(i, x)| x.beta_sq(s.grid.r(i))).collect();
            (a, b)
        })
        .unzip()
}

/// Samples `E_lambda(u)` on `u_schedule` (increasing, `u >= 0`) and the fluxes
/// between consecutive cones. `v_max` defaults to `2 T - max(u)`, the largest
/// value keeping every segment inside the recorded time window.
pub fn null_cone_energies(
    history: &[FieldState],
    lambda: f64,
    u_schedule: &[f64],
    v_max: Option<f64>,
) -> Result<NullConeLedger> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(invalid_arg(format!("lambda must lie in [0, 1), got {lambda}")));
    }
    if history.len() < 2 {
        return Err(invalid_arg("null-cone integrals need at least 2 snapshots"));
    }
    if u_schedule.is_empty() || u_schedule.windows(2).any(|w| w[1] <= w[0]) || u_schedule[0] < 0.0 {
        return Err(invalid_arg("u schedule must be nonempty, nonnegative and increasing"));
    }
    let grid: RadialGrid = history[0].grid;
    let dr = grid.dr();
    let times: Vec<f64> = history.iter().map(|s| s.time).collect();
    let max_gap = times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if max_gap > 2.0 * dr + 1e-12 {
        warn!("snapshot cadence {max_gap} exceeds 2 dr = {}; null-cone integrals lose accuracy", 2.0 * dr);
    }
    let t_first = times[0];
    let t_last = *times.last().unwrap();
    let u_last = *u_schedule.last().unwrap();
    let v_max = v_max.unwrap_or(2.0 * t_last - u_last);

    let (alpha, beta) = null_densities(history);
    let alpha = Interpolated { times: times.clone(), fields: &alpha };
    let beta = Interpolated { times, fields: &beta };
    let n = grid.n_points();

    let samples = u_schedule
        .iter()
        .map(|&u| {
            let r_lo = lambda * u / (1.0 - lambda);
            let r_want = 0.5 * (v_max - u);
            let r_hi = r_want.min(t_last - u).min(grid.r_max());
            let partial = r_hi < r_want - 1e-12 || u / (1.0 - lambda) < t_first || r_lo >= r_hi;
            if r_lo >= r_hi {
                return ConeSample { u, energy: 0.0, partial: true };
            }
            let vals: Vec<f64> = (0..n).map(|i| alpha.at(u + grid.r(i), i)).collect();
            let energy = 2.0 * integrate(&grid, &vals, r_lo, r_hi).unwrap_or(0.0);
            ConeSample { u, energy, partial }
        })
        .collect::<Vec<_>>();

    let fluxes = u_schedule
        .windows(2)
        .map(|w| {
            let (u0, u1) = (w[0], w[1]);
            let r_lo = (0.5 * (v_max - u1)).max(0.0);
            let r_hi = (0.5 * (v_max - u0)).min(grid.r_max());
            let vals: Vec<f64> = (0..n).map(|i| beta.at(v_max - grid.r(i), i)).collect();
            let flux = if r_hi > r_lo {
                2.0 * integrate(&grid, &vals, r_lo, r_hi).unwrap_or(0.0)
            } else {
                0.0
            };
            FluxRecord { u0, u1, flux }
        })
        .collect();

    Ok(NullConeLedger { lambda, v_max, samples, fluxes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::SolitonProfile;

    fn static_history(state: &FieldState, t_end: f64, dt: f64) -> Vec<FieldState> {
        let steps = (t_end / dt).round() as usize;
        (0..=steps)
            .map(|k| {
                let mut s = state.clone();
                s.time = k as f64 * dt;
                s
            })
            .collect()
    }

    #[test]
    fn zero_history_gives_zeros() {
        let g = RadialGrid::with_extent(0.05, 20.0).unwrap();
        let h = static_history(&FieldState::zero(g), 5.0, 0.1);
        let l = null_cone_energies(&h, 0.0, &[0.0, 1.0, 2.0], None).unwrap();
        assert!(l.samples.iter().all(|s| s.energy == 0.0));
        assert!(l.fluxes.iter().all(|f| f.flux == 0.0));
    }

    #[test]
    fn static_soliton_matches_direct_quadrature() {
        let g = RadialGrid::with_extent(0.01, 30.0).unwrap();
        let q = SolitonProfile::new(1.0).unwrap();
        let h = static_history(&q.state(g), 20.0, 0.02);
        let us = [0.0, 2.0, 4.0, 6.0, 8.0];
        let l = null_cone_energies(&h, 0.0, &us, None).unwrap();
        for s in &l.samples {
            // alpha^2 = r e for a static field, so E_0(u) = 2 (4 - 4 / (1 + R^2)).
            let big_r = 0.5 * (l.v_max - s.u);
            let oracle = 2.0 * (4.0 - q.energy_beyond(big_r));
            assert!((s.energy - oracle).abs() < 1e-4, "u={} {} vs {}", s.u, s.energy, oracle);
        }
        assert!(l.monotonicity_violation() <= 1e-10);
        assert!(l.flux_monotonicity_violation() == 0.0);
        assert!(l.identity_defect() < 1e-4);
    }

    #[test]
    fn rejects_bad_schedules() {
        let g = RadialGrid::with_extent(0.05, 20.0).unwrap();
        let h = static_history(&FieldState::zero(g), 5.0, 0.1);
        assert!(null_cone_energies(&h, 1.0, &[0.0], None).is_err());
        assert!(null_cone_energies(&h, 0.0, &[1.0, 0.5], None).is_err());
        assert!(null_cone_energies(&h[..1], 0.0, &[0.0], None).is_err());
    }
}
