use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::field::FieldState;
use crate::grid::RadialGrid;
use crate::solver::{nonlinear_rhs, regular::to_regular};

/// `Q(r / lambda) = 2 arctan(r / lambda)`.
pub fn soliton_value(lambda: f64, r: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(invalid_arg(format!("soliton scale must be positive, got {lambda}")));
    }
    if !(r >= 0.0) {
        return Err(invalid_arg(format!("radius must be nonnegative, got {r}")));
    }
    Ok(2.0 * (r / lambda).atan())
}

/// The harmonic map `Q` at scale `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonProfile {
    lambda: f64,
}

impl SolitonProfile {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid_arg(format!("soliton scale must be positive, got {lambda}")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        2.0 * (r / self.lambda).atan()
    }

    #[inline]
    pub fn derivative(&self, r: f64) -> f64 {
        2.0 * self.lambda / (self.lambda * self.lambda + r * r)
    }

    pub fn sample(&self, grid: &RadialGrid) -> Vec<f64> {
        grid.sample(|r| self.value(r))
    }

    /// The static degree-1 state `(Q(r / lambda), 0)`.
    pub fn state(&self, grid: RadialGrid) -> FieldState {
        FieldState::from_profile(grid, 1, |r| self.value(r)).expect("Q vanishes at the origin")
    }

    /// Energy of `Q(r / lambda)` on `[r, infinity)`: `4 / (1 + (r / lambda)^2)`.
    pub fn energy_beyond(&self, r: f64) -> f64 {
        let x = r / self.lambda;
        4.0 / (1.0 + x * x)
    }
}

/// Max-norm over interior nodes of the discrete harmonic-map residual
/// `Q_rr + Q_r / r - sin(2Q) / (2 r^2)` for sampled `Q(r / lambda)`, using the
/// solver's discretization: with `Q = r v` the residual is
/// `r (L v - N(r, v))`, which stays second order up to the origin.
pub fn stationary_residual(grid: &RadialGrid, profile: &SolitonProfile) -> f64 {
    let q = profile.sample(grid);
    let v = to_regular(grid, &q);
    let rhs = nonlinear_rhs(&v, grid);
    (1..grid.n_points() - 1)
        .map(|i| (grid.r(i) * rhs[i]).abs())
        .fold(0.0, f64::max)
}
