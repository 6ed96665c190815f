//! Residuals of the local energy and virial identities on a densely sampled
//! history, at two resolutions.

use wavemap::diagnostics::{flux_audit, virial_audit, Cutoff};
use wavemap::smooth::window;
use wavemap::solver::{evolve, SolverConfig};
use wavemap::{FieldState, RadialGrid, SolitonProfile};

fn main() -> wavemap::Result<()> {
    for &dr in &[0.02, 0.01] {
        let grid = RadialGrid::with_extent(dr, 20.0)?;
        let q = SolitonProfile::new(1.0)?;
        let mut data = FieldState::from_profile(grid, 1, |r| q.value(r) + 0.3 * window(r, 1.0, 5.0, 1.5))?;
        data.psi_t = grid.sample(|r| -0.2 * window(r, 2.0, 6.0, 1.5));
        let cfg = SolverConfig { t_end: 4.0, record_every: 1, ..Default::default() };
        let out = evolve(&data, &cfg)?;
        let flux = flux_audit(&out.snapshots)?;
        let virial = virial_audit(&out.snapshots, &Cutoff::default())?;
        println!(
            "dr {dr}: flux defect {:.3e} at (t, r) = ({:.2}, {:.2}); virial {:.3e} pointwise, {:.3e} integrated",
            flux.max_defect, flux.at_time, flux.at_radius, virial.pointwise.max_defect, virial.integrated_max_defect
        );
    }
    Ok(())
}
