use serde::{Deserialize, Serialize};

use crate::field::FieldState;
use crate::functionals::{energy_integrand, h_integrand, integrate};
use crate::smooth::cutoff;

/// Which self-similar regions `lambda t <= r <= t - A` are tracked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LedgerSchedule {
    pub lambdas: Vec<f64>,
    pub offsets: Vec<f64>,
}

impl Default for LedgerSchedule {
    fn default() -> Self {
        Self {
            lambdas: vec![0.25, 0.5],
            offsets: vec![5.0, 10.0],
        }
    }
}

impl LedgerSchedule {
    /// `(lambda, A)` pairs, lambda-major.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.lambdas
            .iter()
            .flat_map(|&l| self.offsets.iter().map(move |&a| (l, a)))
            .collect()
    }
}

/// `lambda t <= t - A` with `t > 0`; otherwise the region is undefined.
pub fn region(t: f64, lambda: f64, a: f64) -> Option<(f64, f64)> {
    if t > 0.0 && a <= (1.0 - lambda) * t {
        Some((lambda * t, t - a))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub time: f64,
    pub total_energy: f64,
    /// `E_{lambda t}^{t - A}` per schedule pair; `None` where undefined.
    pub self_similar: Vec<Option<f64>>,
    /// `|| psi - (n pi, 0) ||^2_{H x L^2(lambda t <= r <= t - A)}` per pair.
    pub exterior_h: Vec<Option<f64>>,
    /// `int_A^t int_0^{s - A} psi_t^2 r dr ds` per offset.
    pub cesaro_integral: Vec<f64>,
    /// `int m chi(r / t) r^2 dr`; `None` at `t = 0`.
    pub virial: Option<f64>,
}

impl LedgerRow {
    /// Cesaro average `(1 / t) int_A^t ...` per offset.
    pub fn cesaro_average(&self) -> Vec<Option<f64>> {
        self.cesaro_integral
            .iter()
            .map(|&c| if self.time > 0.0 { Some(c / self.time) } else { None })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub schedule: LedgerSchedule,
    pub rows: Vec<LedgerRow>,
    #[serde(skip)]
    last_kinetic: Option<(f64, Vec<f64>)>,
}

impl EnergyLedger {
    pub fn new(schedule: LedgerSchedule) -> Self {
        Self {
            schedule,
            rows: Vec::new(),
            last_kinetic: None,
        }
    }

    pub fn from_history(schedule: LedgerSchedule, history: &[FieldState]) -> Self {
        let mut ledger = Self::new(schedule);
        for s in history {
            ledger.push(s);
        }
        ledger
    }

    /// Appends the row for `state`; states must arrive in time order.
    pub fn push(&mut self, state: &FieldState) {
        let grid = &state.grid;
        let t = state.time;
        let e_int = energy_integrand(state);
        let total = integrate(grid, &e_int, 0.0, f64::INFINITY).unwrap_or(0.0);

        let pairs = self.schedule.pairs();
        let self_similar = pairs
            .iter()
            .map(|&(l, a)| region(t, l, a).map(|(r1, r2)| integrate(grid, &e_int, r1, r2).unwrap_or(0.0)))
            .collect();

        let needs_exterior = pairs.iter().any(|&(l, a)| region(t, l, a).is_some());
        let exterior_h = if needs_exterior {
            let diff: Vec<f64> = state.psi.iter().map(|p| p - state.boundary_value).collect();
            let h = h_integrand(grid, &diff, Some(&state.psi_t));
            pairs
                .iter()
                .map(|&(l, a)| region(t, l, a).map(|(r1, r2)| integrate(grid, &h, r1, r2).unwrap_or(0.0)))
                .collect()
        } else {
            vec![None; pairs.len()]
        };

        let kinetic: Vec<f64> = state
            .psi_t
            .iter()
            .enumerate()
            .map(|(i, pt)| pt * pt * grid.r(i))
            .collect();
        let inner = |a: f64| -> f64 {
            if t > a {
                integrate(grid, &kinetic, 0.0, t - a).unwrap_or(0.0)
            } else {
                0.0
            }
        };
        let cesaro_integral = match (&self.last_kinetic, self.rows.last()) {
            (Some((t_prev, prev)), Some(row)) => self
                .schedule
                .offsets
                .iter()
                .enumerate()
                .map(|(j, &a)| row.cesaro_integral[j] + 0.5 * (prev[j] + inner(a)) * (t - t_prev))
                .collect(),
            _ => vec![0.0; self.schedule.offsets.len()],
        };
        let current: Vec<f64> = self.schedule.offsets.iter().map(|&a| inner(a)).collect();
        self.last_kinetic = Some((t, current));

        let virial = (t > 0.0).then(|| {
            let vals: Vec<f64> = state
                .densities()
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let r = grid.r(i);
                    d.m_flux * cutoff(r / t) * r * r
                })
                .collect();
            integrate(grid, &vals, 0.0, f64::INFINITY).unwrap_or(0.0)
        });

        self.rows.push(LedgerRow {
            time: t,
            total_energy: total,
            self_similar,
            exterior_h,
            cesaro_integral,
            virial,
        });
    }

    /// `max_k |E_k - E_0| / E_0`; zero for a zero-energy history.
    pub fn relative_energy_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else { return 0.0 };
        if first.total_energy == 0.0 {
            return 0.0;
        }
        self.rows
            .iter()
            .map(|r| (r.total_energy - first.total_energy).abs() / first.total_energy)
            .fold(0.0, f64::max)
    }

    /// CSV header names for the per-pair and per-offset columns.
    pub fn column_names(&self) -> Vec<String> {
        let mut cols = vec!["t".to_string(), "E_total".to_string()];
        for (l, a) in self.schedule.pairs() {
            cols.push(format!("E_lambda_t_to_t_minus_A[lambda={l};A={a}]"));
        }
        for (l, a) in self.schedule.pairs() {
            cols.push(format!("HxL2_sq_exterior[lambda={l};A={a}]"));
        }
        for a in &self.schedule.offsets {
            cols.push(format!("cesaro_psi_t_sq_integral[A={a}]"));
        }
        cols.push("virial_m_chi_r2".to_string());
        cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::soliton::SolitonProfile;

    #[test]
    fn undefined_regions_are_absent() {
        assert!(region(0.0, 0.5, 5.0).is_none());
        assert!(region(9.0, 0.5, 5.0).is_none());
        assert_eq!(region(10.0, 0.5, 5.0), Some((5.0, 5.0)));
        assert_eq!(region(40.0, 0.25, 10.0), Some((10.0, 30.0)));
    }

    #[test]
    fn static_soliton_ledger() {
        let g = RadialGrid::with_extent(0.01, 60.0).unwrap();
        let mut q = SolitonProfile::new(1.0).unwrap().state(g);
        let mut ledger = EnergyLedger::new(LedgerSchedule::default());
        for k in 0..5 {
            q.time = 10.0 * k as f64;
            ledger.push(&q);
        }
        let last = ledger.rows.last().unwrap();
        assert!(ledger.relative_energy_drift() == 0.0);
        for v in last.self_similar.iter().flatten() {
            assert!(*v >= 0.0 && *v <= last.total_energy);
        }
        assert!(last.cesaro_integral.iter().all(|&c| c == 0.0));
        assert_eq!(last.virial, Some(0.0));
        assert_eq!(ledger.rows[0].self_similar, vec![None; 4]);
        assert_eq!(ledger.column_names().len(), 2 + 4 + 4 + 2 + 1);
    }
}
