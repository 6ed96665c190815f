use crate::error::Result;
use crate::field::FieldState;
use crate::grid::RadialGrid;

use super::rk4::RadialOperator;
use super::{evolve_with, EvolutionOutcome, SolverConfig};

/// Discrete `L v = v_rr + (3 / r) v_r`, the radial Laplacian in four space
/// dimensions. At the origin `L v -> 4 v_rr(0)`, discretized with the even
/// reflection `v_{-1} = v_1`. The last node is left at zero (frozen).
#[derive(Debug, Clone, Copy)]
pub struct RadialLaplacian4 {
    grid: RadialGrid,
}

impl RadialLaplacian4 {
    pub fn new(grid: RadialGrid) -> Self {
        Self { grid }
    }

    #[inline]
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = v.len();
        let inv = 1.0 / (self.grid.dr() * self.grid.dr());
        out[0] = 8.0 * (v[1] - v[0]) * inv;
        for i in 1..n - 1 {
            let c = 1.5 / i as f64;
            out[i] = ((1.0 + c) * v[i + 1] - 2.0 * v[i] + (1.0 - c) * v[i - 1]) * inv;
        }
        out[n - 1] = 0.0;
    }
}

impl RadialOperator for RadialLaplacian4 {
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.apply_into(v, out);
    }
}

/// Spatial operator of the linearized equation in the regular variable.
pub fn linear_rhs(v: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    RadialLaplacian4::new(*grid).apply_into(v, &mut out);
    out
}

/// Evolves `phi_tt - phi_rr - phi_r / r + phi / r^2 = 0` from degree-0 data.
pub fn evolve_linear(initial: &FieldState, cfg: &SolverConfig) -> Result<EvolutionOutcome> {
    evolve_with(&RadialLaplacian4::new(initial.grid), initial, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annihilates_zero_and_constants() {
        let g = RadialGrid::new(0.1, 50).unwrap();
        assert!(linear_rhs(&vec![0.0; 50], &g).iter().all(|&x| x == 0.0));
        assert!(linear_rhs(&vec![1.7; 50], &g).iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn exact_on_r_squared() {
        // L r^2 = 2 + 6 = 8 everywhere, including the origin.
        let g = RadialGrid::new(0.1, 50).unwrap();
        let v = g.sample(|r| r * r);
        let out = linear_rhs(&v, &g);
        for x in &out[..49] {
            assert!((x - 8.0).abs() < 1e-9, "{x}");
        }
    }
}
