//! Discrete residuals of the local energy identity
//! `d_t(r e) - d_r(r m) = 0` and the virial identity
//! `d_t(r^2 m) - d_r(r^2 psi_t^2 + r^2 psi_r^2 - sin^2 psi) + 2 r psi_t^2 = 0`
//! on recorded snapshot histories.

use crate::error::{invalid_arg, Result};
use crate::field::FieldState;
use crate::functionals::{integrate, radial_derivative};
use crate::smooth;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub max_defect: f64,
    /// Time of the snapshot where the maximum occurs.
    pub at_time: f64,
    /// Radius where the maximum occurs.
    pub at_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialReport {
    /// Max-norm of the pointwise residual.
    pub pointwise: AuditReport,
    /// Max over snapshots of the residual of the integrated, cut-off identity
    /// for `V(t) = int m chi(r / t) r^2 dr`.
    pub integrated_max_defect: f64,
}

/// Smooth cutoff `chi` and its derivative.
#[derive(Clone, Copy)]
pub struct Cutoff {
    pub value: fn(f64) -> f64,
    pub derivative: fn(f64) -> f64,
}

impl Default for Cutoff {
    fn default() -> Self {
        Self {
            value: smooth::cutoff,
            derivative: smooth::cutoff_derivative,
        }
    }
}

fn check_history(history: &[FieldState]) -> Result<f64> {
    if history.len() < 3 {
        return Err(invalid_arg(format!(
            "identity audits need at least 3 snapshots, got {}",
            history.len()
        )));
    }
    let grid = history[0].grid;
    if history.iter().any(|s| s.grid != grid) {
        return Err(invalid_arg("snapshots live on different grids"));
    }
    let dt = history[1].time - history[0].time;
    if !(dt > 0.0) {
        return Err(invalid_arg("snapshot times must increase"));
    }
    for w in history.windows(2) {
        let d = w[1].time - w[0].time;
        if (d - dt).abs() > 1e-9 * dt.max(1.0) {
            return Err(invalid_arg("identity audits need uniformly spaced snapshots"));
        }
    }
    Ok(dt)
}

fn gradients(history: &[FieldState]) -> Vec<Vec<f64>> {
    history.iter().map(|s| radial_derivative(&s.psi, s.grid.dr())).collect()
}

/// Max-norm residual of the local energy identity, centered in time and
/// space over interior snapshots and interior nodes.
pub fn flux_audit(history: &[FieldState]) -> Result<AuditReport> {
    let dt = check_history(history)?;
    let grid = history[0].grid;
    let dr = grid.dr();
    let n = grid.n_points();
    let psi_r = gradients(history);
    let r_e = |k: usize, i: usize| -> f64 {
        let r = grid.r(i);
        let s = &history[k];
        let pr = psi_r[k][i];
        let sn = s.psi[i].sin();
        r * (s.psi_t[i] * s.psi_t[i] + pr * pr) + if r > 0.0 { sn * sn / r } else { 0.0 }
    };
    let r_m = |k: usize, i: usize| -> f64 { grid.r(i) * 2.0 * history[k].psi_t[i] * psi_r[k][i] };

    let mut report = AuditReport { max_defect: 0.0, at_time: history[0].time, at_radius: 0.0 };
    for k in 1..history.len() - 1 {
        for i in 1..n - 1 {
            let dt_term = (r_e(k + 1, i) - r_e(k - 1, i)) / (2.0 * dt);
            let dr_term = (r_m(k, i + 1) - r_m(k, i - 1)) / (2.0 * dr);
            let defect = (dt_term - dr_term).abs();
            if defect > report.max_defect {
                report = AuditReport { max_defect: defect, at_time: history[k].time, at_radius: grid.r(i) };
            }
        }
    }
    Ok(report)
}

/// Residual of the virial identity, pointwise and integrated against
/// `chi(r / t)`.
pub fn virial_audit(history: &[FieldState], chi: &Cutoff) -> Result<VirialReport> {
    let dt = check_history(history)?;
    let grid = history[0].grid;
    let dr = grid.dr();
    let n = grid.n_points();
    let psi_r = gradients(history);

    let r2m = |k: usize, i: usize| -> f64 {
        let r = grid.r(i);
        r * r * 2.0 * history[k].psi_t[i] * psi_r[k][i]
    };
    let flux = |k: usize, i: usize| -> f64 {
        let r = grid.r(i);
        let s = &history[k];
        let sn = s.psi[i].sin();
        r * r * (s.psi_t[i] * s.psi_t[i] + psi_r[k][i] * psi_r[k][i]) - sn * sn
    };

    let mut pointwise = AuditReport { max_defect: 0.0, at_time: history[0].time, at_radius: 0.0 };
    for k in 1..history.len() - 1 {
        let s = &history[k];
        for i in 1..n - 1 {
            let r = grid.r(i);
            let dt_term = (r2m(k + 1, i) - r2m(k - 1, i)) / (2.0 * dt);
            let dr_term = (flux(k, i + 1) - flux(k, i - 1)) / (2.0 * dr);
            let defect = (dt_term - dr_term + 2.0 * r * s.psi_t[i] * s.psi_t[i]).abs();
            if defect > pointwise.max_defect {
                pointwise = AuditReport { max_defect: defect, at_time: s.time, at_radius: r };
            }
        }
    }

    // V(t) = int m chi(r/t) r^2 dr, and
    // V'(t) = -(1/t) int B chi'(r/t) dr - 2 int psi_t^2 chi(r/t) r dr
    //         - (1/t^2) int m chi'(r/t) r^3 dr,  B = r^2 (psi_t^2 + psi_r^2) - sin^2 psi.
    let virial = |k: usize| -> f64 {
        let t = history[k].time;
        let vals: Vec<f64> = (0..n).map(|i| r2m(k, i) * (chi.value)(grid.r(i) / t)).collect();
        integrate(&grid, &vals, 0.0, f64::INFINITY).unwrap_or(0.0)
    };
    let rhs = |k: usize| -> f64 {
        let s = &history[k];
        let t = s.time;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let r = grid.r(i);
                let x = r / t;
                let dchi = (chi.derivative)(x);
                -flux(k, i) * dchi / t
                    - 2.0 * s.psi_t[i] * s.psi_t[i] * (chi.value)(x) * r
                    - r2m(k, i) * r * dchi / (t * t)
            })
            .collect();
        integrate(&grid, &vals, 0.0, f64::INFINITY).unwrap_or(0.0)
    };
    let mut integrated = 0.0_f64;
    for k in 1..history.len() - 1 {
        if history[k - 1].time <= 0.0 {
            continue;
        }
        let lhs = (virial(k + 1) - virial(k - 1)) / (2.0 * dt);
        integrated = integrated.max((lhs - rhs(k)).abs());
    }

    Ok(VirialReport { pointwise, integrated_max_defect: integrated })
}
