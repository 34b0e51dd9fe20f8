//! Surface with K + 1 = -(2r+1)^2 from an immersive harmonic Gauss map.

use adslf::algebra::Mat2;
use adslf::grid::{Axis, Grid2};
use adslf::harmonic::dalembert_solve;
use adslf::presets;
use adslf::surfaces::{base_node, frame_ratios, fundamental_forms, interior_stats, reconstruct_case1};

fn main() -> Result<(), adslf::error::Error> {
    let grid = Grid2::square(-0.5, 0.5, 1e-2)?;
    let data = presets::cauchy_data(presets::GCP_DEMO, Axis::from_range(-0.5, 0.5, 1e-2)?)?;
    let sol = dalembert_solve(&data, &grid)?;
    for r in [2.0, 0.5, -3.0] {
        let sf = reconstruct_case1(&sol.nu, r, Mat2::identity(), base_node(&grid, 0.0, 0.0))?;
        let geo = fundamental_forms(&sf)?;
        let k = interior_stats(&grid, &geo.k_plus_one, 2);
        let ratios = frame_ratios(&sf, &sol.nu, &sol.frames)?;
        println!(
            "r = {r:+}: K+1 = {:.8} (expected {:.8}, stddev {:.1e}), recovered r = {:.8}",
            k.mean,
            -(2.0 * r + 1.0) * (2.0 * r + 1.0),
            k.stddev,
            ratios.r_stats.mean
        );
    }
    Ok(())
}
