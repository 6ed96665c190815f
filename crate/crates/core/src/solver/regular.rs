use crate::error::{Error, Result};
use crate::field::{FieldState, ORIGIN_PIN_TOL};
use crate::grid::RadialGrid;

/// `v = psi / r`. The origin value is the limit `psi_r(0)`, taken from the
/// odd reflection `psi(-r) = -psi(r)`: `(8 psi_1 - psi_2) / (6 dr)`.
pub fn to_regular(grid: &RadialGrid, psi: &[f64]) -> Vec<f64> {
    let dr = grid.dr();
    let mut v = Vec::with_capacity(psi.len());
    v.push((8.0 * psi[1] - psi[2]) / (6.0 * dr));
    for (i, p) in psi.iter().enumerate().skip(1) {
        v.push(p / grid.r(i));
    }
    v
}

pub fn from_regular(grid: &RadialGrid, v: &[f64]) -> Vec<f64> {
    v.iter().enumerate().map(|(i, x)| grid.r(i) * x).collect()
}

/// Regular field `v` with `psi = r v` for a state pinned at `psi(0) = 0`.
pub fn substitute_regular(state: &FieldState) -> Result<Vec<f64>> {
    if state.psi[0].abs() > ORIGIN_PIN_TOL {
        return Err(Error::InvalidState(format!(
            "psi(0) = {} is not pinned to 0",
            state.psi[0]
        )));
    }
    Ok(to_regular(&state.grid, &state.psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::SolitonProfile;

    #[test]
    fn ramp_and_zero() {
        let g = RadialGrid::new(0.05, 40).unwrap();
        let ramp = FieldState::from_profile(g, 0, |r| r).unwrap();
        let v = substitute_regular(&ramp).unwrap();
        assert!(v.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let v0 = substitute_regular(&FieldState::zero(g)).unwrap();
        assert!(v0.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn soliton_origin_limit_is_two() {
        // Q_r(0) = 2; the reflected stencil error is O(dr^4).
        let mut prev_err = f64::INFINITY;
        for &dr in &[0.1, 0.05, 0.025] {
            let g = RadialGrid::with_extent(dr, 5.0).unwrap();
            let q = SolitonProfile::new(1.0).unwrap().state(g);
            let v = substitute_regular(&q).unwrap();
            let err = (v[0] - 2.0).abs();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 1e-5);
    }

    #[test]
    fn rejects_unpinned_state() {
        let g = RadialGrid::new(0.05, 40).unwrap();
        let mut s = FieldState::zero(g);
        s.psi[0] = 1e-3;
        assert!(substitute_regular(&s).is_err());
    }
}
