//! Free radiation: the linearized flow of a Gaussian shell, its conserved
//! energy and the share of it that escapes past the light cone `r = t`.

use wavemap::functionals::h_norm_sq_of;
use wavemap::solver::{evolve_linear, SolverConfig};
use wavemap::{FieldState, RadialGrid};

fn main() -> wavemap::Result<()> {
    let grid = RadialGrid::with_extent(0.01, 40.0)?;
    let phi = FieldState::from_profile(grid, 0, |r| r * (-(r / 3.0) * (r / 3.0)).exp())?;
    let cfg = SolverConfig { t_end: 20.0, record_every: 250, ..Default::default() };
    let out = evolve_linear(&phi, &cfg)?;

    let e0 = h_norm_sq_of(&grid, &phi.psi, Some(&phi.psi_t), 0.0, f64::INFINITY)?;
    println!("{:>6} {:>14} {:>12}", "t", "rel. drift", "exterior");
    for s in &out.snapshots {
        let e = h_norm_sq_of(&grid, &s.psi, Some(&s.psi_t), 0.0, f64::INFINITY)?;
        let ext = h_norm_sq_of(&grid, &s.psi, Some(&s.psi_t), s.time, f64::INFINITY)?;
        println!("{:>6.2} {:>14.3e} {:>12.6}", s.time, (e - e0).abs() / e0, ext / e0);
    }
    Ok(())
}
