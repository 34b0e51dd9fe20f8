//! Parallel surfaces f cos t + N sin t and the CMC to CGC correspondence.

use adslf::grid::Grid2;
use adslf::parallel::{parallel_curvatures, parallel_surface, theta_for_cgc, theta_for_cmc};
use adslf::surfaces::{fundamental_forms, geodesic_patch, interior_stats};

fn main() -> Result<(), adslf::error::Error> {
    let grid = Grid2::square(-0.5, 0.5, 1e-2)?;
    // an umbilic CMC surface: a parallel of the totally geodesic patch
    let cmc = parallel_surface(&geodesic_patch(grid), 0.3)?.surface;
    let g = fundamental_forms(&cmc)?;
    let h = interior_stats(&grid, &g.mean, 3).mean;
    let k = interior_stats(&grid, &g.k_plus_one, 3).mean - 1.0;
    println!("base: K = {k:.8}, H = {h:.8}");

    let (t, kt) = theta_for_cgc(h);
    let p = parallel_surface(&cmc, t)?;
    let pk = interior_stats(&grid, &fundamental_forms(&p.surface)?.k_plus_one, 3).mean - 1.0;
    println!("tan 2t = 1/H at t = {t:.8}: K^t = {pk:.8}, predicted {kt:.8}");

    let (kt, ht) = parallel_curvatures(k, h, 0.2)?;
    println!("transformation law at t = 0.2: K^t = {kt:.8}, H^t = {ht:.8}");
    println!("K + 1 < 0 has no CMC angle: {}", theta_for_cmc(-26.0).unwrap_err());
    Ok(())
}
