//! Surface with K + 1 = -1 from a Gauss map depending on x only
//! (example-5.7), compared with its closed form.

use adslf::grid::Grid2;
use adslf::presets::{self, printed};
use adslf::surfaces::{base_node, case2_initial, fundamental_forms, interior_stats, reconstruct_case2, solve_omega};

fn main() -> Result<(), adslf::error::Error> {
    let theta = 0.6;
    let grid = Grid2::square(-1.0, 1.0, 1e-2)?;
    let (a, b) = presets::example_5_7_coefficients(theta);
    let nu = presets::example_5_7_nu(grid);
    let omega = solve_omega(&presets::example_5_7_frames(grid), a, b);
    let sf = reconstruct_case2(&nu, &omega, case2_initial(theta), base_node(&grid, 0.0, 0.0))?;
    let worst = (0..grid.len())
        .map(|k| {
            let (x, y) = grid.point(k % grid.nx(), k / grid.nx());
            (sf.f[k] - printed::surface_5_7(theta, x, y)).max_abs()
        })
        .fold(0.0, f64::max);
    let geo = fundamental_forms(&sf)?;
    println!("A = {a:.6}, B = {b:.6}");
    println!("max |f - closed form| = {worst:.3e}");
    println!("K+1 = {:.10} (stddev {:.1e})", interior_stats(&grid, &geo.k_plus_one, 2).mean, interior_stats(&grid, &geo.k_plus_one, 2).stddev);
    println!("H   = {:.10} (stddev {:.1e})", interior_stats(&grid, &geo.mean, 2).mean, interior_stats(&grid, &geo.mean, 2).stddev);
    Ok(())
}
