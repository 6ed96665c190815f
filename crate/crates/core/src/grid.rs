use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};

pub const MIN_POINTS: usize = 16;

/// Uniform radial mesh `r_i = i * dr`, `i = 0..n_points`, with `r_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    dr: f64,
    n_points: usize,
}

impl RadialGrid {
    pub fn new(dr: f64, n_points: usize) -> Result<Self> {
        if !(dr > 0.0) || !dr.is_finite() {
            return Err(invalid_arg(format!("grid spacing must be positive, got {dr}")));
        }
        if n_points < MIN_POINTS {
            return Err(invalid_arg(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        Ok(Self { dr, n_points })
    }

    /// Grid covering `[0, r_max]`; `r_max` is rounded to the nearest node.
    pub fn with_extent(dr: f64, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(invalid_arg(format!("r_max must be positive, got {r_max}")));
        }
        let cells = (r_max / dr).round();
        Self::new(dr, cells as usize + 1)
    }

    #[inline]
    pub fn dr(&self) -> f64 {
        self.dr
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn r_max(&self) -> f64 {
        self.dr * (self.n_points - 1) as f64
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.dr
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.r(i)).collect()
    }

    /// Index of the node closest to `r`, clamped to the grid.
    pub fn nearest_index(&self, r: f64) -> usize {
        let i = (r / self.dr).round();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.n_points - 1)
        }
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n_points).map(|i| f(self.r(i))).collect()
    }
}
