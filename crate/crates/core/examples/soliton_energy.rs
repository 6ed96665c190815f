//! Energy of the harmonic map `Q(r / lambda)` on a truncated grid, with and
//! without the analytic tail, and the saturated `G` bound.

use wavemap::functionals::{energy, g_function, total_energy};
use wavemap::{RadialGrid, SolitonProfile, SOLITON_ENERGY};

fn main() -> wavemap::Result<()> {
    let grid = RadialGrid::with_extent(0.005, 40.0)?;
    println!("{:>8} {:>14} {:>14} {:>12}", "lambda", "truncated", "with tail", "error");
    for &lambda in &[0.25, 0.5, 1.0, 2.0, 4.0] {
        let q = SolitonProfile::new(lambda)?;
        let state = q.state(grid);
        let truncated = total_energy(&state, None);
        let full = total_energy(&state, Some(lambda));
        println!("{lambda:>8} {truncated:>14.9} {full:>14.9} {:>12.3e}", (full - SOLITON_ENERGY).abs());
    }

    let q = SolitonProfile::new(1.0)?.state(grid);
    for &r in &[0.5, 1.0, 2.0, 8.0] {
        let i = grid.nearest_index(r);
        let g = g_function(q.psi[i]);
        let half = 0.5 * energy(&q, 0.0, grid.r(i))?;
        println!("r = {r:>4}: G(Q) = {g:.8}, E(0, r) / 2 = {half:.8}");
    }
    Ok(())
}
