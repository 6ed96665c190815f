use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::grid::RadialGrid;

use super::linear::RadialLaplacian4;
use super::regular::{from_regular, substitute_regular};
use super::rk4::{RadialOperator, Rk4};
use super::{evolve_with, EvolutionOutcome, SolverConfig, MAX_CFL};

/// `|2 r v|` below which the Taylor series of the nonlinearity is used.
pub const SERIES_SWITCH: f64 = 1.0;

/// `(-4)^k / (2k + 1)!` for `k = 1..=10`.
const SERIES: [f64; 10] = {
    let mut c = [0.0; 10];
    let mut k = 1;
    let mut fact = 1.0;
    let mut pow = 1.0;
    let mut n = 1;
    while k <= 10 {
        while n < 2 * k + 1 {
            n += 1;
            fact *= n as f64;
        }
        pow *= -4.0;
        c[k - 1] = pow / fact;
        k += 1;
    }
    c
};

/// `N(r, v) = (sin(2 r v) - 2 r v) / (2 r^3)`, smooth and even in `r`.
/// Near `r v = 0` it is `v^3 * sum_k (-4)^k (r v)^{2k - 2} / (2k + 1)!`.
#[inline]
pub fn nonlinearity(r: f64, v: f64) -> f64 {
    let y = r * v;
    let x = 2.0 * y;
    if x.abs() < SERIES_SWITCH {
        let z = y * y;
        let mut acc = 0.0;
        for c in SERIES.iter().rev() {
            acc = acc * z + c;
        }
        v * v * v * acc
    } else {
        (x.sin() - x) / (2.0 * r * r * r)
    }
}

/// `v_tt = v_rr + (3 / r) v_r - N(r, v)`, the wave map equation for
/// `psi = r v`.
#[derive(Debug, Clone, Copy)]
pub struct WaveMapOperator {
    laplacian: RadialLaplacian4,
    grid: RadialGrid,
}

impl WaveMapOperator {
    pub fn new(grid: RadialGrid) -> Self {
        Self {
            laplacian: RadialLaplacian4::new(grid),
            grid,
        }
    }
}

impl RadialOperator for WaveMapOperator {
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.laplacian.apply_into(v, out);
        let n = v.len();
        for i in 0..n - 1 {
            out[i] -= nonlinearity(self.grid.r(i), v[i]);
        }
    }
}

pub fn nonlinear_rhs(v: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    WaveMapOperator::new(*grid).apply(v, &mut out);
    out
}

/// One RK4 step of the wave map equation. The outer node is held fixed.
pub fn step(state: &FieldState, dt: f64) -> Result<FieldState> {
    let grid = state.grid;
    if !(dt > 0.0) || dt > MAX_CFL * grid.dr() {
        return Err(Error::InvalidArgument(format!(
            "time step {dt} violates 0 < dt <= {MAX_CFL} dr"
        )));
    }
    let mut v = substitute_regular(state)?;
    let mut w = super::regular::to_regular(&grid, &state.psi_t);
    let last = w.len() - 1;
    w[last] = 0.0;
    let op = WaveMapOperator::new(grid);
    Rk4::new(v.len()).step(&op, &mut v, &mut w, dt);
    let next = FieldState {
        grid,
        psi: from_regular(&grid, &v),
        psi_t: from_regular(&grid, &w),
        time: state.time + dt,
        boundary_value: state.boundary_value,
    };
    if !next.is_finite() {
        return Err(Error::InvalidState("non-finite values after step".into()));
    }
    Ok(next)
}

/// Evolves the wave map equation from `initial` according to `cfg`.
pub fn evolve(initial: &FieldState, cfg: &SolverConfig) -> Result<EvolutionOutcome> {
    evolve_with(&WaveMapOperator::new(initial.grid), initial, cfg)
}
