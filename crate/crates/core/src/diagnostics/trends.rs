//! Finite-horizon decay trends of global solutions: energy in the
//! self-similar region, the exterior `L^inf` deviation from the boundary
//! value, and the pointwise exterior bound
//! `|psi(t, r) - psi(t, inf)| <= sqrt(E) sqrt((A + R) / (t - A))` for
//! `r >= t - A` when the data are supported in `r <= R`.

use log::warn;

use crate::error::Result;
use crate::field::FieldState;
use crate::functionals::{energy_integrand, integrate, total_energy};

use super::ledger::{region, LedgerSchedule};

#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub time: f64,
    /// `E_{lambda t}^{t - A}` per schedule pair.
    pub self_similar: Vec<Option<f64>>,
    /// `sup_{r >= lambda t} |psi - n pi|` per schedule lambda.
    pub exterior_linf: Vec<f64>,
    /// `(measured, bound)` per offset `A < t`.
    pub exterior_bound: Vec<Option<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub schedule: LedgerSchedule,
    pub rows: Vec<TrendRow>,
    pub bound_checked: bool,
    /// `(t, A, measured, bound)` wherever measured exceeds bound + tolerance.
    pub violations: Vec<(f64, f64, f64, f64)>,
    pub warnings: Vec<String>,
}

impl TrendReport {
    pub fn row_at(&self, t: f64) -> Option<&TrendRow> {
        self.rows
            .iter()
            .min_by(|a, b| (a.time - t).abs().partial_cmp(&(b.time - t).abs()).unwrap())
    }

    pub fn pair_index(&self, lambda: f64, a: f64) -> Option<usize> {
        self.schedule.pairs().iter().position(|&(l, x)| l == lambda && x == a)
    }
}

fn sup_deviation(state: &FieldState, r_from: f64) -> f64 {
    let start = ((r_from / state.grid.dr()).ceil().max(0.0) as usize).min(state.len());
    state.psi[start..]
        .iter()
        .map(|p| (p - state.boundary_value).abs())
        .fold(0.0, f64::max)
}

/// `support_radius = None` means the data are not compactly supported and the
/// exterior bound is skipped.
pub fn decay_trends(
    history: &[FieldState],
    schedule: &LedgerSchedule,
    support_radius: Option<f64>,
    tolerance: f64,
) -> Result<TrendReport> {
    let mut warnings = Vec::new();
    let energy = history.first().map(|s| total_energy(s, None)).unwrap_or(0.0);
    if support_radius.is_none() {
        let msg = "data not compactly supported; exterior bound check skipped".to_string();
        warn!("{msg}");
        warnings.push(msg);
    }
    let mut rows = Vec::with_capacity(history.len());
    let mut violations = Vec::new();
    for s in history {
        let t = s.time;
        let e_int = energy_integrand(s);
        let self_similar = schedule
            .pairs()
            .iter()
            .map(|&(l, a)| region(t, l, a).map(|(r1, r2)| integrate(&s.grid, &e_int, r1, r2).unwrap_or(0.0)))
            .collect();
        let exterior_linf = schedule.lambdas.iter().map(|&l| sup_deviation(s, l * t)).collect();
        let exterior_bound = schedule
            .offsets
            .iter()
            .map(|&a| {
                let big_r = support_radius?;
                if a >= t {
                    return None;
                }
                let measured = sup_deviation(s, t - a);
                let bound = energy.sqrt() * ((a + big_r) / (t - a)).sqrt();
                if measured > bound + tolerance {
                    violations.push((t, a, measured, bound));
                }
                Some((measured, bound))
            })
            .collect();
        rows.push(TrendRow { time: t, self_similar, exterior_linf, exterior_bound });
    }
    Ok(TrendReport {
        schedule: schedule.clone(),
        rows,
        bound_checked: support_radius.is_some(),
        violations,
        warnings,
    })
}

/// Largest `E(t; 0, R - (t - s)) - E(s; 0, R)` over snapshot pairs `s <= t`
/// with `R - (t - s) >= 0`. Energy in shrinking interior cones cannot grow.
pub fn interior_cone_violation(history: &[FieldState], big_r: f64) -> f64 {
    let integrands: Vec<Vec<f64>> = history.iter().map(energy_integrand).collect();
    let mut worst = f64::NEG_INFINITY;
    for (j, sj) in history.iter().enumerate() {
        let before = integrate(&sj.grid, &integrands[j], 0.0, big_r).unwrap_or(0.0);
        for (k, sk) in history.iter().enumerate().skip(j) {
            let radius = big_r - (sk.time - sj.time);
            if radius < 0.0 {
                break;
            }
            let after = integrate(&sk.grid, &integrands[k], 0.0, radius).unwrap_or(0.0);
            worst = worst.max(after - before);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::soliton::SolitonProfile;

    #[test]
    fn zero_solution_trends_are_zero() {
        let g = RadialGrid::with_extent(0.05, 40.0).unwrap();
        let h: Vec<_> = (0..=4)
            .map(|k| {
                let mut s = FieldState::zero(g);
                s.time = 10.0 * k as f64;
                s
            })
            .collect();
        let rep = decay_trends(&h, &LedgerSchedule::default(), Some(1.0), 1e-3).unwrap();
        assert!(rep.violations.is_empty());
        for row in &rep.rows {
            assert!(row.self_similar.iter().flatten().all(|&x| x == 0.0));
            assert!(row.exterior_linf.iter().all(|&x| x == 0.0));
        }
        assert_eq!(interior_cone_violation(&h, 20.0), 0.0);
    }

    #[test]
    fn non_compact_data_skips_bound() {
        let g = RadialGrid::with_extent(0.05, 40.0).unwrap();
        let q = SolitonProfile::new(1.0).unwrap().state(g);
        let rep = decay_trends(&[q], &LedgerSchedule::default(), None, 1e-3).unwrap();
        assert!(!rep.bound_checked);
        assert!(rep.rows[0].exterior_bound.iter().all(Option::is_none));
        assert_eq!(rep.warnings.len(), 1);
    }
}
