//! Surface with K + 1 = -rho^2 through a prescribed curve with prescribed
//! Gauss map, from closed-form data and from a curve CSV.

use adslf::gcp::{self, GeometricCauchyData};
use adslf::grid::{Axis, Grid2};
use adslf::io::CurveTable;
use adslf::surfaces::{fundamental_forms, interior_stats};

fn main() -> Result<(), adslf::error::Error> {
    let data = gcp::preset("gcp-demo", None)?;
    let grid = Grid2::square(-0.6, 0.6, 1e-2)?;
    let sol = gcp::gcp_solve(&data, &grid)?;
    let rep = gcp::diagonal_report(&data, &sol);
    let k = interior_stats(&grid, &fundamental_forms(&sol.surface)?.k_plus_one, 2);
    println!("closed-form data, rho = {}", data.rho);
    println!("  f(t,t) - curve {:.2e}, nu(t,t) - nu~ {:.2e}", rep.curve, rep.gauss_map);
    println!("  K+1 = {:.8} (stddev {:.1e})", k.mean, k.stddev);

    // the same curve written to and read back from the curve CSV schema
    let axis = Axis::from_range(-1.0, 1.0, 0.01)?;
    let table = CurveTable {
        t: axis.coords(),
        f: axis.coords().iter().map(|t| gcp::demo_curve(*t).f).collect(),
        nu: axis.coords().iter().map(|t| gcp::demo_curve(*t).nu.to_mat()).collect(),
    };
    let mut csv = Vec::new();
    table.write(&mut csv)?;
    let back = CurveTable::read(csv.as_slice())?;
    let tab = GeometricCauchyData::tabulated(back.axis()?, back.f.clone(), back.nu_vectors()?, gcp::DEMO_RHO)?;
    let sol2 = gcp::gcp_solve(&tab, &grid)?;
    let diff = sol.surface.f.iter().zip(&sol2.surface.f).map(|(a, b)| (*a - *b).max_abs()).fold(0.0, f64::max);
    println!("tabulated data: max |f_tab - f| = {diff:.2e}");

    println!("example-6.2 data rejected: {}", gcp::preset("example-6.2", Some(2.0)).unwrap_err());
    Ok(())
}
