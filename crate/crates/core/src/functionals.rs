//! Integral functionals on radial fields: energy, the `G` function and the
//! `H x L^2` norm. Quadrature is the composite trapezoid rule on the grid
//! nodes with linearly interpolated partial cells at the endpoints.

use std::f64::consts::PI;

use crate::error::{invalid_arg, Result};
use crate::field::FieldState;
use crate::grid::RadialGrid;

/// First derivative: centered in the interior, one-sided second order at
/// both ends.
pub fn radial_derivative(values: &[f64], dr: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 3 {
        return out;
    }
    let inv = 1.0 / (2.0 * dr);
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv;
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) * inv;
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) * inv;
    out
}

fn snap(x: f64) -> f64 {
    let k = x.round();
    if (x - k).abs() < 1e-9 {
        k
    } else {
        x
    }
}

/// Trapezoid integral of node values `f` over `[r1, r2]`. `r2 = inf` (or
/// anything past the last node) is clipped to `r_max`.
pub fn integrate(grid: &RadialGrid, f: &[f64], r1: f64, r2: f64) -> Result<f64> {
    if !(r1 >= 0.0) {
        return Err(invalid_arg(format!("lower radius must be nonnegative, got {r1}")));
    }
    if r1 > r2 {
        return Err(invalid_arg(format!("empty interval [{r1}, {r2}]")));
    }
    let dr = grid.dr();
    let r_max = grid.r_max();
    let r2 = r2.min(r_max);
    if r1 >= r2 {
        return Ok(0.0);
    }
    let x1 = snap(r1 / dr);
    let x2 = snap(r2 / dr);
    let last = grid.n_points() - 1;
    let interp = |x: f64| -> f64 {
        let i = (x.floor() as usize).min(last - 1);
        let w = x - i as f64;
        f[i] * (1.0 - w) + f[i + 1] * w
    };
    let i1 = x1.ceil() as usize;
    let i2 = (x2.floor() as usize).min(last);
    if i1 > i2 {
        return Ok(0.5 * (interp(x1) + interp(x2)) * (r2 - r1));
    }
    let mut sum = 0.0;
    if (i1 as f64) > x1 {
        sum += 0.5 * (interp(x1) + f[i1]) * (i1 as f64 - x1) * dr;
    }
    for i in i1..i2 {
        sum += 0.5 * (f[i] + f[i + 1]) * dr;
    }
    if x2 > i2 as f64 {
        sum += 0.5 * (f[i2] + interp(x2)) * (x2 - i2 as f64) * dr;
    }
    Ok(sum)
}

/// `(psi_t^2 + psi_r^2 + sin^2 psi / r^2) r` at every node.
pub fn energy_integrand(state: &FieldState) -> Vec<f64> {
    state
        .densities()
        .iter()
        .enumerate()
        .map(|(i, s)| s.e * state.grid.r(i))
        .collect()
}

/// Localized energy on `[r1, r2]`; `r2 = f64::INFINITY` means the whole grid.
pub fn energy(state: &FieldState, r1: f64, r2: f64) -> Result<f64> {
    integrate(&state.grid, &energy_integrand(state), r1, r2)
}

/// Energy of the whole state. Adds the exact tail of `Q(r / lambda)` beyond
/// `r_max` when `soliton_tail` is given.
pub fn total_energy(state: &FieldState, soliton_tail: Option<f64>) -> f64 {
    let inner = energy(state, 0.0, f64::INFINITY).expect("full-range energy is well formed");
    match soliton_tail {
        Some(lambda) => {
            let x = state.grid.r_max() / lambda;
            inner + 4.0 / (1.0 + x * x)
        }
        None => inner,
    }
}

/// `G(psi) = int_0^psi |sin rho| d rho`, extended oddly to negative arguments.
pub fn g_function(psi: f64) -> f64 {
    if psi < 0.0 {
        return -g_function(-psi);
    }
    let k = (psi / PI).floor();
    let rem = psi - k * PI;
    2.0 * k + (1.0 - rem.cos())
}

/// `int (dpsi_t^2 + dpsi_r^2 + dpsi^2 / r^2) r dr` for a difference field
/// that vanishes at the origin. `diff_psi_t = None` gives the position part.
pub fn h_norm_sq_of(
    grid: &RadialGrid,
    diff_psi: &[f64],
    diff_psi_t: Option<&[f64]>,
    r1: f64,
    r2: f64,
) -> Result<f64> {
    let integrand = h_integrand(grid, diff_psi, diff_psi_t);
    integrate(grid, &integrand, r1, r2)
}

pub(crate) fn h_integrand(grid: &RadialGrid, diff_psi: &[f64], diff_psi_t: Option<&[f64]>) -> Vec<f64> {
    let dr = grid.dr();
    let d_r = radial_derivative(diff_psi, dr);
    (0..grid.n_points())
        .map(|i| {
            let r = grid.r(i);
            if r == 0.0 {
                return 0.0;
            }
            let q = diff_psi[i] / r;
            let vel = diff_psi_t.map_or(0.0, |v| v[i] * v[i]);
            (vel + d_r[i] * d_r[i] + q * q) * r
        })
        .collect()
}

/// `|| (a - b) ||^2_{H x L^2(r1 <= r <= r2)}`.
pub fn h_l2_norm_sq(a: &FieldState, b: &FieldState, r1: f64, r2: f64) -> Result<f64> {
    if !a.same_grid(b) {
        return Err(invalid_arg("states live on different grids"));
    }
    if (a.psi[0] - b.psi[0]).abs() > crate::field::ORIGIN_PIN_TOL {
        return Err(invalid_arg("states are pinned to different classes at the origin"));
    }
    let diff = a.difference(b)?;
    h_norm_sq_of(&a.grid, &diff.psi, Some(&diff.psi_t), r1, r2)
}
