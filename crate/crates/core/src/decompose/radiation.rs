use std::f64::consts::PI;

use log::warn;

use crate::error::{invalid_arg, Result};
use crate::field::FieldState;
use crate::functionals::{energy, total_energy};

#[derive(Debug, Clone)]
pub struct RadiationExtraction {
    /// Degree-0 data `(phi^0 - pi, phi^1)` for the linear flow.
    pub data: FieldState,
    /// Cutoff radius snapped to the grid.
    pub cutoff_radius: f64,
    pub cutoff_index: usize,
    /// `E_0^rho(psi)`, the energy replaced by the interior fill.
    pub discarded_energy: f64,
    /// Energy of the linear ramp on `[0, rho]`, `O(|pi - psi(rho)|^2)`.
    pub fill_energy: f64,
    /// Energy functional of the extracted data.
    pub energy: f64,
    pub warning: Option<String>,
}

/// Replaces the degree-1 state inside `rho` by the ramp
/// `pi - (pi - psi(rho)) r / rho` at rest and subtracts `pi`.
pub fn extract_radiation(state: &FieldState, rho: f64) -> Result<RadiationExtraction> {
    if state.degree() != 1 {
        return Err(invalid_arg(format!(
            "radiation extraction needs a degree-1 state, got degree {}",
            state.degree()
        )));
    }
    if !(rho > 0.0) {
        return Err(invalid_arg(format!("cutoff radius must be positive, got {rho}")));
    }
    let grid = state.grid;
    let j = grid.nearest_index(rho).clamp(1, grid.n_points() - 2);
    let rho = grid.r(j);
    let edge = state.psi[j];
    let warning = ((edge - PI).abs() > PI / 2.0).then(|| {
        let msg = format!(
            "psi(rho = {rho}) = {edge:.4} is farther than pi/2 from pi; cutoff lies inside the bubble"
        );
        warn!("{msg}");
        msg
    });
    let slope = (PI - edge) / rho;
    let mut psi = Vec::with_capacity(grid.n_points());
    let mut psi_t = Vec::with_capacity(grid.n_points());
    for i in 0..grid.n_points() {
        if i <= j {
            psi.push(-slope * grid.r(i));
            psi_t.push(0.0);
        } else {
            psi.push(state.psi[i] - PI);
            psi_t.push(state.psi_t[i]);
        }
    }
    let data = FieldState::new(grid, psi, psi_t, state.time, 0)?;
    let discarded_energy = energy(state, 0.0, rho)?;
    let fill_energy = energy(&data, 0.0, rho)?;
    let total = total_energy(&data, None);
    Ok(RadiationExtraction {
        data,
        cutoff_radius: rho,
        cutoff_index: j,
        discarded_energy,
        fill_energy,
        energy: total,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::soliton::SolitonProfile;

    #[test]
    fn pure_soliton_leaves_little_radiation() {
        for &lambda in &[0.5, 1.0] {
            let g = RadialGrid::with_extent(0.005, 400.0).unwrap();
            let q = SolitonProfile::new(lambda).unwrap();
            let ext = extract_radiation(&q.state(g), 100.0 * lambda).unwrap();
            // Exterior energy of Q beyond 100 lambda plus the ramp energy.
            let tail = q.energy_beyond(100.0 * lambda);
            let gap = PI - q.value(100.0 * lambda);
            assert!(ext.energy <= tail + 2.0 * gap * gap, "{}", ext.energy);
            assert!(ext.energy < 0.01);
            assert!(ext.fill_energy <= 2.0 * gap * gap);
            assert!(ext.warning.is_none());
        }
    }

    #[test]
    fn constant_pi_exterior_extracts_nothing() {
        let g = RadialGrid::with_extent(0.01, 20.0).unwrap();
        let s = FieldState::from_profile(g, 1, |r| if r >= 3.0 { PI } else { PI * r / 3.0 }).unwrap();
        let ext = extract_radiation(&s, 5.0).unwrap();
        assert!(ext.data.psi.iter().chain(&ext.data.psi_t).all(|&x| x.abs() < 1e-15));
        assert_eq!(ext.energy, 0.0);
    }

    #[test]
    fn warns_when_cutoff_inside_bubble() {
        let g = RadialGrid::with_extent(0.01, 20.0).unwrap();
        let q = SolitonProfile::new(1.0).unwrap().state(g);
        assert!(extract_radiation(&q, 0.5).unwrap().warning.is_some());
        assert!(extract_radiation(&FieldState::zero(g), 1.0).is_err());
    }
}
