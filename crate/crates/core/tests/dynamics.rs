use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wavemap::diagnostics::interior_cone_violation;
use wavemap::functionals::{h_l2_norm_sq, h_norm_sq_of, total_energy};
use wavemap::harness::{make_initial_data, InitialData};
use wavemap::smooth::window;
use wavemap::solver::{evolve, evolve_linear, SolverConfig, Verdict};
use wavemap::{FieldState, RadialGrid, SolitonProfile};

fn config(t_end: f64, record_every: usize) -> SolverConfig {
    SolverConfig { t_end, record_every, ..Default::default() }
}

fn reversed(state: &FieldState) -> FieldState {
    let mut s = state.clone();
    s.psi_t.iter_mut().for_each(|x| *x = -*x);
    s.time = 0.0;
    s
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn bump_leaves_the_interior_untouched() {
    let g = RadialGrid::with_extent(0.005, 20.0).unwrap();
    let s = FieldState::from_profile(g, 0, |r| 0.3 * window(r, 5.0, 6.0, 0.25)).unwrap();
    let out = evolve(&s, &config(1.0, 25)).unwrap();
    let i_max = g.nearest_index(3.9);
    let dev = out.final_state.psi[..=i_max].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    assert!(dev <= 1e-12, "{dev}");
}

#[test]
fn disturbances_stay_behind_the_light_cone() {
    let g = RadialGrid::with_extent(0.01, 30.0).unwrap();
    let r0 = 8.0;
    let s = FieldState::from_profile(g, 0, |r| 0.4 * window(r, r0, r0 + 2.0, 0.5)).unwrap();
    let out = evolve(&s, &config(6.0, 25)).unwrap();
    // RK4 precursors decay like a power of (distance / dr) ahead of the cone.
    let margin = 30.0 * g.dr();
    let mut worst = 0.0_f64;
    for snap in &out.snapshots {
        let edge = r0 - snap.time - margin;
        for (i, p) in snap.psi.iter().enumerate() {
            if g.r(i) <= edge {
                worst = worst.max(p.abs());
            }
        }
    }
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn class_pinning_is_exact() {
    let g = RadialGrid::with_extent(0.02, 30.0).unwrap();
    let q = SolitonProfile::new(1.0).unwrap();
    let mut s = FieldState::from_profile(g, 1, |r| q.value(r) + 0.3 * window(r, 2.0, 5.0, 0.8)).unwrap();
    s.psi_t = g.sample(|r| 0.2 * window(r, 1.0, 4.0, 0.8));
    let outer = s.psi[g.n_points() - 1];
    let out = evolve(&s, &config(10.0, 25)).unwrap();
    for snap in &out.snapshots {
        assert_eq!(snap.psi[0], 0.0);
        assert_eq!(snap.psi[g.n_points() - 1], outer);
        assert_eq!(snap.degree(), 1);
    }
}

#[test]
fn solitons_are_stationary_at_second_order() {
    for &lambda in &[0.5, 1.0, 2.0] {
        let deviation = |dr: f64| {
            let g = RadialGrid::with_extent(dr, 40.0).unwrap();
            let q = SolitonProfile::new(lambda).unwrap().state(g);
            let out = evolve(&q, &config(5.0, 50)).unwrap();
            out.snapshots
                .iter()
                .map(|s| h_l2_norm_sq(s, &q, 0.0, 20.0).unwrap().sqrt())
                .fold(0.0, f64::max)
        };
        let coarse = deviation(0.02);
        let fine = deviation(0.01);
        let order = (coarse / fine).log2();
        assert!(order >= 1.95, "lambda {lambda}: {coarse:.3e} -> {fine:.3e}, order {order:.3}");
    }
}

#[test]
fn nonlinear_evolution_runs_backwards() {
    let g = RadialGrid::with_extent(0.01, 30.0).unwrap();
    let q = SolitonProfile::new(1.0).unwrap();
    let mut s = FieldState::from_profile(g, 1, |r| q.value(r) + 0.2 * window(r, 3.0, 6.0, 1.0)).unwrap();
    s.psi_t = g.sample(|r| -0.1 * window(r, 3.0, 6.0, 1.0));
    let forward = evolve(&s, &config(3.0, 25)).unwrap();
    let back = evolve(&reversed(&forward.final_state), &config(3.0, 25)).unwrap();
    let err = max_abs_diff(&back.final_state.psi, &s.psi);
    let err_t = max_abs_diff(&back.final_state.psi_t, &reversed(&s).psi_t);
    assert!(err < 1e-7 && err_t < 1e-7, "{err:.3e} {err_t:.3e}");
}

#[test]
fn linear_evolution_runs_backwards() {
    let g = RadialGrid::with_extent(0.01, 30.0).unwrap();
    let s = FieldState::from_profile(g, 0, |r| r * (-(r - 3.0) * (r - 3.0)).exp() * window(r, 0.0, 8.0, 2.0)).unwrap();
    let forward = evolve_linear(&s, &config(4.0, 25)).unwrap();
    let back = evolve_linear(&reversed(&forward.final_state), &config(4.0, 25)).unwrap();
    let err = max_abs_diff(&back.final_state.psi, &s.psi);
    assert!(err < 1e-7, "{err:.3e}");
}

#[test]
fn interior_cones_lose_energy() {
    let g = RadialGrid::with_extent(0.01, 40.0).unwrap();
    let q = SolitonProfile::new(1.0).unwrap();
    let mut s = FieldState::from_profile(g, 1, |r| q.value(r) + 0.3 * window(r, 2.0, 6.0, 1.0)).unwrap();
    s.psi_t = g.sample(|r| 0.3 * window(r, 1.0, 5.0, 1.0));
    let out = evolve(&s, &config(12.0, 10)).unwrap();
    let e0 = total_energy(&s, None);
    for &big_r in &[4.0, 8.0, 12.0] {
        let v = interior_cone_violation(&out.snapshots, big_r);
        assert!(v <= 1e-4 * e0, "R = {big_r}: {v:.3e}");
    }
}

fn linear_energy_drift(width: f64, dr: f64) -> f64 {
    let g = RadialGrid::with_extent(dr, 40.0).unwrap();
    let s = FieldState::from_profile(g, 0, |r| r * (-(r / width) * (r / width)).exp()).unwrap();
    let out = evolve_linear(&s, &config(10.0, 25)).unwrap();
    let h = |st: &FieldState| h_norm_sq_of(&g, &st.psi, Some(&st.psi_t), 0.0, f64::INFINITY).unwrap();
    let e0 = h(&s);
    out.snapshots.iter().map(|st| (h(st) - e0).abs() / e0).fold(0.0, f64::max)
}

#[test]
fn linear_gaussian_energy_is_conserved() {
    let drift = linear_energy_drift(3.0, 0.01);
    assert!(drift <= 1e-5, "{drift:.3e}");
}

#[test]
fn linear_energy_drift_is_second_order() {
    let coarse = linear_energy_drift(1.0, 0.02);
    let fine = linear_energy_drift(1.0, 0.01);
    let order = (coarse / fine).log2();
    assert!(order >= 1.95, "{coarse:.3e} -> {fine:.3e}, order {order:.3}");
}

#[test]
fn linear_exterior_energy_ratio_stays_positive() {
    let g = RadialGrid::with_extent(0.02, 45.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut floor = f64::INFINITY;
    for _ in 0..20 {
        let support = rng.gen_range(3.0..10.0);
        let comps: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..4))
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..support * 0.6), rng.gen_range(0.4..1.5)))
            .collect();
        let f = |r: f64| {
            let shells: f64 = comps
                .iter()
                .map(|&(a, c, w)| {
                    let gs = |x: f64| (-(x / w) * (x / w)).exp();
                    a * (r / w) * (gs(r - c) + gs(r + c))
                })
                .sum();
            shells * window(r, 0.0, support, 0.25 * support)
        };
        let s = FieldState::from_profile(g, 0, f).unwrap();
        let norm0 = h_norm_sq_of(&g, &s.psi, None, 0.0, f64::INFINITY).unwrap();
        let out = evolve_linear(&s, &config(20.0, 50)).unwrap();
        for st in &out.snapshots {
            let ext = h_norm_sq_of(&g, &st.psi, Some(&st.psi_t), st.time, f64::INFINITY).unwrap();
            floor = floor.min(ext / norm0);
        }
    }
    println!("exterior energy ratio floor over t in [0, 20]: {floor:.6}");
    assert!(floor > 0.05, "{floor}");
}

#[test]
fn imploding_data_conserve_energy_until_the_verdict() {
    let g = RadialGrid::with_extent(0.01, 50.0).unwrap();
    let family = |speed| InitialData::Imploding { lambda: 1.0, speed, inner: 0.5, outer: 6.0 };
    // The energy is E0 + speed^2 K; pick the speed giving a total of 4 + 2.
    let e1 = make_initial_data(&family(1.0), g, 0).unwrap().energy;
    let e2 = make_initial_data(&family(2.0), g, 0).unwrap().energy;
    let k = (e2 - e1) / 3.0;
    let data = make_initial_data(&family(((6.0 - (e1 - k)) / k).sqrt()), g, 0).unwrap();
    assert!((data.energy - 6.0).abs() < 1e-9, "{}", data.energy);
    let out = evolve(&data.state, &config(20.0, 25)).unwrap();
    assert!(matches!(out.verdict, Verdict::Completed | Verdict::BlowupDetected));
    let drift = out.ledger.relative_energy_drift();
    println!("imploding energy {:.6}, verdict {}, drift {drift:.3e}", data.energy, out.verdict.as_str());
    assert!(drift <= 1e-4, "{drift:.3e}");
}
