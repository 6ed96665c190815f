use wavemap::decompose::{fit_scale, track_decomposition, CutoffPolicy};
use wavemap::functionals::total_energy;
use wavemap::smooth::window;
use wavemap::solver::{evolve_linear, SolverConfig, Verdict};
use wavemap::{FieldState, RadialGrid, SolitonProfile};

fn static_history(state: &FieldState, times: &[f64]) -> Vec<FieldState> {
    times
        .iter()
        .map(|&t| {
            let mut s = state.clone();
            s.time = t;
            s
        })
        .collect()
}

#[test]
fn residual_vanishes_with_the_energy_excess() {
    let g = RadialGrid::with_extent(0.01, 60.0).unwrap();
    let q = SolitonProfile::new(1.0).unwrap();
    let e_q = total_energy(&q.state(g), Some(1.0));
    let mut last: Option<(f64, f64)> = None;
    for &eps in &[0.2, 0.1, 0.05, 0.025, 0.0] {
        let a = FieldState::from_profile(g, 1, |r| q.value(r) + eps * r * (-(r - 4.0) * (r - 4.0)).exp()).unwrap();
        let fit = fit_scale(&a).unwrap();
        let excess = (total_energy(&a, Some(1.0)) - e_q).abs();
        if let Some((res, exc)) = last {
            assert!(fit.residual_sq < res, "eps {eps}: residual {} after {res}", fit.residual_sq);
            assert!(excess < exc, "eps {eps}: excess {excess} after {exc}");
        }
        last = Some((fit.residual_sq, excess));
    }
    let (res, exc) = last.unwrap();
    assert!(res < 1e-9 && exc == 0.0, "{res:.3e} {exc:.3e}");
}

#[test]
fn static_soliton_radiation_is_its_tail() {
    let g = RadialGrid::with_extent(0.01, 80.0).unwrap();
    let profile = SolitonProfile::new(1.5).unwrap();
    let q = profile.state(g);
    let history = static_history(&q, &[0.0, 2.0, 4.0, 6.0, 8.0]);
    let mut last_error = f64::INFINITY;
    for &rho in &[5.0, 10.0, 20.0] {
        let policy = CutoffPolicy { radius: Some(rho), ..Default::default() };
        let report = track_decomposition(&history, Verdict::Completed, &[], &policy).unwrap();
        let rad = report.radiation.as_ref().unwrap();
        let tail = rad.energy - rad.fill_energy;
        let oracle = profile.energy_beyond(rho) - profile.energy_beyond(g.r_max());
        assert!((tail - oracle).abs() < 1e-3 * tail, "rho {rho}: {tail} vs {oracle}");
        let error = report
            .records
            .iter()
            .map(|r| (r.lambda_fit / 1.5 - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(error < last_error, "rho {rho}: {error} after {last_error}");
        last_error = error;
    }
}

#[test]
fn linear_waves_carry_no_bubble() {
    let g = RadialGrid::with_extent(0.02, 40.0).unwrap();
    let phi = FieldState::from_profile(g, 0, |r| 0.5 * r * (-(r - 3.0) * (r - 3.0)).exp() * window(r, 0.0, 8.0, 2.0)).unwrap();
    let cfg = SolverConfig { t_end: 8.0, record_every: 100, ..Default::default() };
    let out = evolve_linear(&phi, &cfg).unwrap();
    let report = track_decomposition(&out.snapshots, out.verdict, &out.concentration, &CutoffPolicy::default()).unwrap();
    assert!(report.radiation.is_none());
    assert!(report.degenerate);
    assert!(report.records.iter().all(|r| r.degenerate && r.ambiguous));
}

#[test]
fn early_histories_are_refused() {
    let g = RadialGrid::with_extent(0.02, 30.0).unwrap();
    let q = SolitonProfile::new(1.0).unwrap().state(g);
    let history = static_history(&q, &[0.0, 1.0, 2.0]);
    assert!(track_decomposition(&history, Verdict::Completed, &[], &CutoffPolicy::default()).is_err());
    let shuffled = static_history(&q, &[0.0, 6.0, 5.0]);
    assert!(track_decomposition(&shuffled, Verdict::Completed, &[], &CutoffPolicy::default()).is_err());
}
