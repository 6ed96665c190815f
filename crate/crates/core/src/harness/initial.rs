//! Initial-data families. Every family is regular at the origin and pinned
//! to `psi(0) = 0`; bumps and pulses are cut off with C-infinity windows so
//! the dynamic part of the data has compact support.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::functionals::total_energy;
use crate::grid::RadialGrid;
use crate::smooth::{smooth_step, window};
use crate::soliton::SolitonProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `(Q(r / lambda), 0)`.
    Soliton { lambda: f64 },
    /// `Q(r / lambda) + amplitude * exp(-((r - center) / width)^2) * w(r)`, at rest.
    SolitonPlusBump {
        lambda: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `amplitude * r * exp(-(r / width)^2)` in position, or in velocity when
    /// `velocity_only`. With `target_energy` the amplitude is rescaled to hit it.
    DegreeZeroPulse {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        velocity_only: bool,
        #[serde(default)]
        target_energy: Option<f64>,
    },
    /// `(Q(r / lambda), -speed * Q_r(r / lambda) * w(r))` with `w` a window on
    /// `[inner, outer]`. Positive `speed` moves the annulus outward, negative
    /// inward.
    Imploding {
        lambda: f64,
        speed: f64,
        inner: f64,
        outer: f64,
    },
    /// Seeded sum of windowed Gaussian shells, degree 0, at rest. Each shell
    /// is symmetrized in `r` so that `psi / r` is even and the data are smooth.
    RandomPulse {
        components: usize,
        max_amplitude: f64,
        support: f64,
        #[serde(default)]
        target_energy: Option<f64>,
    },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Soliton { lambda: 1.0 }
    }
}

/// Data on a grid plus the facts the validators need.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub state: FieldState,
    /// Energy, including the exact `Q` tail beyond `r_max` for soliton-based data.
    pub energy: f64,
    pub degree: i32,
    /// Radius outside which the data coincide with a stationary solution.
    pub dynamic_support: f64,
    /// Radius containing the supports of `psi_r` and `psi_t`, when compact.
    pub compact_support: Option<f64>,
    pub soliton_tail: Option<f64>,
}

fn bump_window(r: f64, center: f64, width: f64) -> f64 {
    let a = (center - 8.0 * width).max(0.0);
    let b = center + 8.0 * width;
    window(r, a, b, 2.0 * width)
}

fn pulse_cutoff(r: f64, support: f64, width: f64) -> f64 {
    smooth_step((support - r) / (2.0 * width))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must be positive, got {x}")))
    }
}

impl InitialData {
    pub fn tag(&self) -> &'static str {
        match self {
            InitialData::Soliton { .. } => "soliton",
            InitialData::SolitonPlusBump { .. } => "soliton_plus_bump",
            InitialData::DegreeZeroPulse { .. } => "degree_zero_pulse",
            InitialData::Imploding { .. } => "imploding",
            InitialData::RandomPulse { .. } => "random_pulse",
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            InitialData::DegreeZeroPulse { .. } | InitialData::RandomPulse { .. } => 0,
            _ => 1,
        }
    }

    /// Radius outside which the data are stationary.
    pub fn dynamic_support(&self) -> f64 {
        match *self {
            InitialData::Soliton { .. } => 0.0,
            InitialData::SolitonPlusBump { center, width, .. } => center + 8.0 * width,
            InitialData::DegreeZeroPulse { width, .. } => 8.0 * width,
            InitialData::Imploding { outer, .. } => outer,
            InitialData::RandomPulse { support, .. } => support,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            InitialData::Soliton { lambda } => positive("lambda", lambda),
            InitialData::SolitonPlusBump { lambda, width, center, amplitude } => {
                positive("lambda", lambda)?;
                positive("width", width)?;
                if !(center >= 0.0) || !amplitude.is_finite() {
                    return Err(Error::InvalidConfig("bump center and amplitude must be finite, center >= 0".into()));
                }
                Ok(())
            }
            InitialData::DegreeZeroPulse { width, amplitude, target_energy, .. } => {
                positive("width", width)?;
                if !amplitude.is_finite() {
                    return Err(Error::InvalidConfig("pulse amplitude must be finite".into()));
                }
                if let Some(e) = target_energy {
                    positive("target_energy", e)?;
                }
                Ok(())
            }
            InitialData::Imploding { lambda, inner, outer, speed } => {
                positive("lambda", lambda)?;
                if !(inner >= 0.0 && outer > inner) || !speed.is_finite() {
                    return Err(Error::InvalidConfig(format!("annulus [{inner}, {outer}] is empty")));
                }
                Ok(())
            }
            InitialData::RandomPulse { components, max_amplitude, support, target_energy } => {
                if components == 0 {
                    return Err(Error::InvalidConfig("random pulse needs at least one component".into()));
                }
                positive("support", support)?;
                if !max_amplitude.is_finite() {
                    return Err(Error::InvalidConfig("max_amplitude must be finite".into()));
                }
                if let Some(e) = target_energy {
                    positive("target_energy", e)?;
                }
                Ok(())
            }
        }
    }

    fn sample(&self, grid: RadialGrid, seed: u64, amplitude_override: Option<f64>) -> Result<FieldState> {
        let n = grid.n_points();
        let (psi, psi_t) = match *self {
            InitialData::Soliton { lambda } => {
                let q = SolitonProfile::new(lambda)?;
                (q.sample(&grid), vec![0.0; n])
            }
            InitialData::SolitonPlusBump { lambda, amplitude, center, width } => {
                let q = SolitonProfile::new(lambda)?;
                let psi = grid.sample(|r| {
                    let x = (r - center) / width;
                    q.value(r) + amplitude * (-x * x).exp() * bump_window(r, center, width)
                });
                (psi, vec![0.0; n])
            }
            InitialData::DegreeZeroPulse { amplitude, width, velocity_only, .. } => {
                let amp = amplitude_override.unwrap_or(amplitude);
                let f = grid.sample(|r| {
                    let x = r / width;
                    amp * r * (-x * x).exp() * pulse_cutoff(r, 8.0 * width, width)
                });
                if velocity_only {
                    (vec![0.0; n], f)
                } else {
                    (f, vec![0.0; n])
                }
            }
            InitialData::Imploding { lambda, speed, inner, outer } => {
                let q = SolitonProfile::new(lambda)?;
                let edge = 0.25 * (outer - inner);
                let psi_t = grid.sample(|r| -speed * q.derivative(r) * window(r, inner, outer, edge));
                (q.sample(&grid), psi_t)
            }
            InitialData::RandomPulse { components, max_amplitude, support, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let shells: Vec<(f64, f64, f64)> = (0..components)
                    .map(|_| {
                        let amp = rng.gen_range(-max_amplitude..=max_amplitude);
                        let center = rng.gen_range(0.1 * support..0.6 * support);
                        let width = rng.gen_range(0.04 * support..0.12 * support);
                        (amp, center, width)
                    })
                    .collect();
                let scale = amplitude_override.unwrap_or(1.0);
                let psi = grid.sample(|r| {
                    let s: f64 = shells
                        .iter()
                        .map(|&(a, c, w)| {
                            let (x, y) = ((r - c) / w, (r + c) / w);
                            a * (r / w) * ((-x * x).exp() + (-y * y).exp())
                        })
                        .sum();
                    scale * s * pulse_cutoff(r, support, 0.1 * support)
                });
                (psi, vec![0.0; n])
            }
        };
        FieldState::new(grid, psi, psi_t, 0.0, self.degree())
    }

    fn target_energy(&self) -> Option<f64> {
        match *self {
            InitialData::DegreeZeroPulse { target_energy, .. } | InitialData::RandomPulse { target_energy, .. } => {
                target_energy
            }
            _ => None,
        }
    }

    fn base_amplitude(&self) -> f64 {
        match *self {
            InitialData::DegreeZeroPulse { amplitude, .. } => amplitude,
            _ => 1.0,
        }
    }
}

/// Samples the family on `grid`, applies any energy target, and checks the
/// class pinning at both ends.
pub fn make_initial_data(family: &InitialData, grid: RadialGrid, seed: u64) -> Result<PreparedData> {
    family.validate()?;
    let degree = family.degree();
    let soliton_tail = match *family {
        InitialData::Soliton { lambda }
        | InitialData::SolitonPlusBump { lambda, .. }
        | InitialData::Imploding { lambda, .. } => Some(lambda),
        _ => None,
    };

    let mut state = family.sample(grid, seed, None)?;
    if let Some(target) = family.target_energy() {
        let amp = calibrate_amplitude(family, grid, seed, target)?;
        state = family.sample(grid, seed, Some(amp))?;
    }

    let far = state.psi[grid.n_points() - 1];
    if (far - degree as f64 * PI).abs() > PI / 2.0 {
        return Err(Error::InvalidConfig(format!(
            "psi(r_max) = {far} is not near the class value {} pi",
            degree
        )));
    }
    let energy = total_energy(&state, soliton_tail);
    let compact_support = match family {
        InitialData::Soliton { .. } | InitialData::SolitonPlusBump { .. } | InitialData::Imploding { .. } => None,
        _ => Some(family.dynamic_support()),
    };
    Ok(PreparedData {
        state,
        energy,
        degree,
        dynamic_support: family.dynamic_support(),
        compact_support,
        soliton_tail,
    })
}

/// Bisection on the amplitude scale; the energy of a degree-0 pulse is
/// increasing in `|amplitude|` below the first fold of `sin^2`.
fn calibrate_amplitude(family: &InitialData, grid: RadialGrid, seed: u64, target: f64) -> Result<f64> {
    let base = family.base_amplitude();
    let sign = if base < 0.0 { -1.0 } else { 1.0 };
    let energy_at = |a: f64| -> Result<f64> { Ok(total_energy(&family.sample(grid, seed, Some(a))?, None)) };
    let unit = if base == 0.0 { 1.0 } else { base.abs() };
    let mut hi = unit;
    let mut tries = 0;
    while energy_at(sign * hi)? < target {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::InvalidConfig(format!("cannot reach target energy {target}")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy_at(sign * mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(sign * 0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> RadialGrid {
        RadialGrid::with_extent(1e-3, 60.0).unwrap()
    }

    #[test]
    fn soliton_family_has_energy_four() {
        let d = make_initial_data(&InitialData::Soliton { lambda: 1.0 }, grid(), 0).unwrap();
        assert!((d.energy - 4.0).abs() < 1e-6, "{}", d.energy);
        assert_eq!(d.degree, 1);
        assert_eq!(d.compact_support, None);
    }

    #[test]
    fn zero_amplitude_pulse_is_zero_state() {
        let fam = InitialData::DegreeZeroPulse { amplitude: 0.0, width: 1.0, velocity_only: false, target_energy: None };
        let d = make_initial_data(&fam, grid(), 0).unwrap();
        assert!(d.state.psi.iter().chain(&d.state.psi_t).all(|&x| x == 0.0));
        assert_eq!(d.energy, 0.0);
    }

    #[test]
    fn every_family_is_regular_at_the_origin() {
        let families = [
            InitialData::Soliton { lambda: 0.7 },
            InitialData::SolitonPlusBump { lambda: 1.0, amplitude: 0.3, center: 1.0, width: 1.0 },
            InitialData::DegreeZeroPulse { amplitude: 0.5, width: 1.0, velocity_only: false, target_energy: None },
            InitialData::DegreeZeroPulse { amplitude: 0.5, width: 1.0, velocity_only: true, target_energy: None },
            InitialData::Imploding { lambda: 1.0, speed: 1.0, inner: 0.0, outer: 4.0 },
            InitialData::RandomPulse { components: 3, max_amplitude: 0.5, support: 6.0, target_energy: None },
        ];
        // psi / r is even, so its one-sided slope at the origin is O(dr).
        let slope = |values: &[f64], dr: f64| {
            let v = |i: usize| values[i] / (i as f64 * dr);
            (v(2) - v(1)) / dr
        };
        for fam in &families {
            let mut slopes = Vec::new();
            for &dr in &[0.01, 0.005] {
                let d = make_initial_data(fam, RadialGrid::with_extent(dr, 30.0).unwrap(), 3).unwrap();
                let s = slope(&d.state.psi, dr).abs().max(slope(&d.state.psi_t, dr).abs());
                slopes.push(s);
            }
            assert!(slopes[1] <= 0.6 * slopes[0] + 1e-9, "{}: {slopes:?}", fam.tag());
        }
    }

    /// Frozen from `tests/oracles/freeze_values.py` (mpmath quadrature of
    /// the same profile, including the exact `Q` tail).
    const GOLDEN_BUMP_ENERGY: f64 = 4.406_849_066_713_271;

    #[test]
    fn golden_bump_energy_matches_quadrature_oracle() {
        let fam = InitialData::SolitonPlusBump { lambda: 1.0, amplitude: 0.2, center: 8.0, width: 1.0 };
        let d = make_initial_data(&fam, grid(), 0).unwrap();
        assert!((d.energy - GOLDEN_BUMP_ENERGY).abs() < 1e-6, "{}", d.energy);
        assert_eq!(d.dynamic_support, 16.0);
    }

    #[test]
    fn target_energy_is_hit() {
        let fam = InitialData::DegreeZeroPulse { amplitude: 0.1, width: 1.0, velocity_only: false, target_energy: Some(0.5) };
        let g = RadialGrid::with_extent(0.01, 20.0).unwrap();
        let d = make_initial_data(&fam, g, 0).unwrap();
        assert!((d.energy - 0.5).abs() < 1e-12);
        assert_eq!(d.compact_support, Some(8.0));
    }

    #[test]
    fn random_pulse_is_seeded() {
        let fam = InitialData::RandomPulse { components: 3, max_amplitude: 0.3, support: 8.0, target_energy: None };
        let g = RadialGrid::with_extent(0.01, 20.0).unwrap();
        let a = make_initial_data(&fam, g, 7).unwrap();
        let b = make_initial_data(&fam, g, 7).unwrap();
        let c = make_initial_data(&fam, g, 8).unwrap();
        assert_eq!(a.state.psi, b.state.psi);
        assert_ne!(a.state.psi, c.state.psi);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(make_initial_data(&InitialData::Soliton { lambda: -1.0 }, grid(), 0).is_err());
        let fam = InitialData::Imploding { lambda: 1.0, speed: 1.0, inner: 3.0, outer: 2.0 };
        assert!(make_initial_data(&fam, grid(), 0).is_err());
    }
}
