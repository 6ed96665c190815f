use log::warn;

use crate::error::Result;
use crate::field::FieldState;
use crate::functionals::h_norm_sq_of;
use crate::soliton::SolitonProfile;

/// Number of log-spaced scales in the coarse scan.
pub const SCAN_POINTS: usize = 64;
/// Relative tolerance of the golden-section refinement.
pub const REFINE_RTOL: f64 = 1e-6;
/// Separate local minima within this relative margin of the best one make
/// the fit ambiguous.
pub const AMBIGUITY_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFit {
    pub lambda: f64,
    /// `|| a - Q(. / lambda) ||_H^2` at the optimum.
    pub residual_sq: f64,
    pub ambiguous: bool,
    /// The optimum sits on the edge of `[dr, r_max]`, or `a` is not degree 1.
    pub degenerate: bool,
}

/// `|| a - Q(. / lambda) ||_H^2` over the whole grid.
pub fn scale_objective(a: &FieldState, lambda: f64) -> f64 {
    let q = SolitonProfile::new(lambda).expect("positive scale");
    let diff: Vec<f64> = a
        .psi
        .iter()
        .enumerate()
        .map(|(i, p)| p - q.value(a.grid.r(i)))
        .collect();
    h_norm_sq_of(&a.grid, &diff, None, 0.0, f64::INFINITY).expect("full-range integral")
}

/// `argmin_lambda || a - Q(. / lambda) ||_H^2`: coarse log scan over
/// `[dr, r_max]`, then golden-section search in `log lambda` around the best
/// scan point. Ties go to the smaller scale.
pub fn fit_scale(a: &FieldState) -> Result<ScaleFit> {
    let grid = a.grid;
    let (lo, hi) = (grid.dr().ln(), grid.r_max().ln());
    let log_scales: Vec<f64> = (0..SCAN_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let values: Vec<f64> = log_scales.iter().map(|&x| scale_objective(a, x.exp())).collect();

    let mut best = 0;
    for k in 1..SCAN_POINTS {
        if values[k] < values[best] {
            best = k;
        }
    }

    let local_minima: Vec<usize> = (0..SCAN_POINTS)
        .filter(|&k| {
            let left = k == 0 || values[k] <= values[k - 1];
            let right = k == SCAN_POINTS - 1 || values[k] <= values[k + 1];
            left && right
        })
        .collect();
    let floor = values[best].abs().max(f64::MIN_POSITIVE);
    let mut ambiguous = local_minima
        .iter()
        .any(|&k| k.abs_diff(best) > 1 && values[k] - values[best] <= AMBIGUITY_MARGIN * floor);
    let mut degenerate = best == 0 || best == SCAN_POINTS - 1;
    if a.degree() != 1 {
        warn!("scale fit on a degree-{} state; no bubble to fit", a.degree());
        ambiguous = true;
        degenerate = true;
    }
    if ambiguous && !degenerate {
        warn!("scale fit objective has several comparable minima; keeping the smallest scale");
    }

    let (lambda, residual_sq) = if degenerate {
        (log_scales[best].exp(), values[best])
    } else {
        golden_section(a, log_scales[best - 1], log_scales[best + 1])
    };
    Ok(ScaleFit { lambda, residual_sq, ambiguous, degenerate })
}

fn golden_section(a: &FieldState, mut x0: f64, mut x3: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let f = |x: f64| scale_objective(a, x.exp());
    let mut x1 = x3 - inv_phi * (x3 - x0);
    let mut x2 = x0 + inv_phi * (x3 - x0);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // Width in log space is the relative tolerance on lambda.
    while x3 - x0 > REFINE_RTOL {
        if f1 <= f2 {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - inv_phi * (x3 - x0);
            f1 = f(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + inv_phi * (x3 - x0);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;

    #[test]
    fn exact_profile_recovers_scale() {
        let g = RadialGrid::with_extent(0.01, 50.0).unwrap();
        let q = SolitonProfile::new(2.0).unwrap().state(g);
        let fit = fit_scale(&q).unwrap();
        assert!((fit.lambda / 2.0 - 1.0).abs() < 1e-5, "{}", fit.lambda);
        assert!(fit.residual_sq < 1e-9);
        assert!(!fit.ambiguous && !fit.degenerate);
    }

    #[test]
    fn degree_zero_input_is_degenerate() {
        let g = RadialGrid::with_extent(0.01, 30.0).unwrap();
        let s = FieldState::from_profile(g, 0, |r| 0.3 * r * (-r * r).exp()).unwrap();
        let fit = fit_scale(&s).unwrap();
        assert!(fit.ambiguous && fit.degenerate);
    }
}
