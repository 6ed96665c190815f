//! Energies on outgoing null cones `u = t - r` for a degree-zero pulse, the
//! flux through the closing ingoing cone and the identity that ties them.

use wavemap::diagnostics::null_cone_energies;
use wavemap::smooth::window;
use wavemap::solver::{evolve, SolverConfig};
use wavemap::{FieldState, RadialGrid};

fn main() -> wavemap::Result<()> {
    let grid = RadialGrid::with_extent(0.02, 40.0)?;
    let mut data = FieldState::from_profile(grid, 0, |r| 0.8 * r * (-r * r / 4.0).exp() * window(r, 0.0, 10.0, 3.0))?;
    data.psi_t = grid.sample(|r| 0.3 * window(r, 1.0, 6.0, 1.5));
    let cfg = SolverConfig { t_end: 20.0, record_every: 1, ..Default::default() };
    let out = evolve(&data, &cfg)?;

    let us: Vec<f64> = (0..8).map(|k| 1.25 * k as f64).collect();
    let ledger = null_cone_energies(&out.snapshots, 0.0, &us, None)?;
    println!("v_max = {}", ledger.v_max);
    for s in &ledger.samples {
        println!("u = {:>5.2}  E_0(u) = {:.6}{}", s.u, s.energy, if s.partial { "  (partial)" } else { "" });
    }
    for (f, c) in ledger.fluxes.iter().zip(ledger.cumulative_flux().iter().skip(1)) {
        println!("F({:.2}, {:.2}) = {:.6}, cumulative {:.6}", f.u0, f.u1, f.flux, c);
    }
    println!("monotonicity violation {:.3e}", ledger.monotonicity_violation());
    println!("identity defect        {:.3e}", ledger.identity_defect());
    Ok(())
}
