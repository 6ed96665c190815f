use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::functionals::radial_derivative;
use crate::grid::RadialGrid;

/// Tolerance on `|psi(0) - m pi|` for the class pinning at the origin.
pub const ORIGIN_PIN_TOL: f64 = 1e-12;

/// Sampled `(psi, psi_t)` on a grid at one instant. Linear states `(phi, phi_t)`
/// use the same type with `boundary_value == 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub grid: RadialGrid,
    pub psi: Vec<f64>,
    pub psi_t: Vec<f64>,
    pub time: f64,
    /// Class annotation `n pi` with `psi(t, infinity) = n pi`.
    pub boundary_value: f64,
}

impl FieldState {
    /// Builds a state and checks array lengths and the pinning `psi(0) = 0`.
    /// The origin value is set to exactly zero when it is within tolerance.
    pub fn new(
        grid: RadialGrid,
        mut psi: Vec<f64>,
        psi_t: Vec<f64>,
        time: f64,
        degree: i32,
    ) -> Result<Self> {
        let n = grid.n_points();
        if psi.len() != n || psi_t.len() != n {
            return Err(invalid_arg(format!(
                "field arrays have lengths {} / {}, grid has {n} points",
                psi.len(),
                psi_t.len()
            )));
        }
        if psi[0].abs() > ORIGIN_PIN_TOL {
            return Err(Error::InvalidState(format!(
                "psi(0) = {} violates the class pinning psi(0) = 0",
                psi[0]
            )));
        }
        psi[0] = 0.0;
        Ok(Self {
            grid,
            psi,
            psi_t,
            time,
            boundary_value: degree as f64 * PI,
        })
    }

    pub fn zero(grid: RadialGrid) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            psi: vec![0.0; n],
            psi_t: vec![0.0; n],
            time: 0.0,
            boundary_value: 0.0,
        }
    }

    /// Static state `(f(r), 0)` of the given degree.
    pub fn from_profile(grid: RadialGrid, degree: i32, f: impl Fn(f64) -> f64) -> Result<Self> {
        let psi = grid.sample(f);
        Self::new(grid, psi, vec![0.0; grid.n_points()], 0.0, degree)
    }

    pub fn degree(&self) -> i32 {
        (self.boundary_value / PI).round() as i32
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn same_grid(&self, other: &FieldState) -> bool {
        self.grid == other.grid
    }

    /// Pointwise difference `self - other` as a degree-`deg(self) - deg(other)` state.
    pub fn difference(&self, other: &FieldState) -> Result<FieldState> {
        if !self.same_grid(other) {
            return Err(invalid_arg("states live on different grids"));
        }
        let psi = self.psi.iter().zip(&other.psi).map(|(a, b)| a - b).collect();
        let psi_t = self.psi_t.iter().zip(&other.psi_t).map(|(a, b)| a - b).collect();
        Ok(FieldState {
            grid: self.grid,
            psi,
            psi_t,
            time: self.time,
            boundary_value: self.boundary_value - other.boundary_value,
        })
    }

    /// Energy and momentum densities `e`, `m` at every node.
    pub fn densities(&self) -> Vec<EnergyDensitySample> {
        let dr = self.grid.dr();
        let psi_r = radial_derivative(&self.psi, dr);
        (0..self.len())
            .map(|i| EnergyDensitySample::at(self.grid.r(i), self.psi[i], psi_r[i], self.psi_t[i]))
            .collect()
    }

    /// `max |psi_r|` over the grid.
    pub fn max_gradient(&self) -> f64 {
        radial_derivative(&self.psi, self.grid.dr())
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.psi.iter().chain(&self.psi_t).all(|x| x.is_finite())
    }
}

/// `e = psi_t^2 + psi_r^2 + sin^2(psi) / r^2` and `m = 2 psi_t psi_r` at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDensitySample {
    pub e: f64,
    pub m_flux: f64,
}

impl EnergyDensitySample {
    /// At `r = 0` the potential term takes its limit `psi_r(0)^2`.
    pub fn at(r: f64, psi: f64, psi_r: f64, psi_t: f64) -> Self {
        let potential = if r > 0.0 {
            let s = psi.sin() / r;
            s * s
        } else {
            psi_r * psi_r
        };
        Self {
            e: psi_t * psi_t + psi_r * psi_r + potential,
            m_flux: 2.0 * psi_t * psi_r,
        }
    }

    /// Outgoing null density `alpha^2 = r (e + m)`.
    pub fn alpha_sq(&self, r: f64) -> f64 {
        r * (self.e + self.m_flux)
    }

    /// Incoming null density `beta^2 = r (e - m)`.
    pub fn beta_sq(&self, r: f64) -> f64 {
        r * (self.e - self.m_flux)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unpinned_origin_and_bad_lengths() {
        let g = RadialGrid::new(0.1, 32).unwrap();
        let bad = vec![0.5; 32];
        assert!(matches!(
            FieldState::new(g, bad, vec![0.0; 32], 0.0, 0),
            Err(Error::InvalidState(_))
        ));
        assert!(FieldState::new(g, vec![0.0; 31], vec![0.0; 32], 0.0, 0).is_err());
    }

    #[test]
    fn null_densities_are_nonnegative() {
        for &(psi, pr, pt) in &[(0.3, 1.0, -1.0), (2.0, -3.0, 3.0), (0.0, 0.5, 0.2)] {
            let s = EnergyDensitySample::at(0.7, psi, pr, pt);
            assert!(s.e >= s.m_flux.abs());
            assert!(s.alpha_sq(0.7) >= 0.0 && s.beta_sq(0.7) >= 0.0);
        }
    }
}
