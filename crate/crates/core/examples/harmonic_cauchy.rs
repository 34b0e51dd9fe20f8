//! Lorentz harmonic map from Cauchy data on the diagonal, by loop
//! factorisation, checked against characteristic marching.

use adslf::grid::{Axis, Grid2};
use adslf::harmonic::{characteristic_oracle, dalembert_solve, harmonicity_residual};
use adslf::presets;

fn main() -> Result<(), adslf::error::Error> {
    let grid = Grid2::square(-0.5, 0.5, 1e-2)?;
    let data = presets::cauchy_data(presets::EXAMPLE_4_2, Axis::from_range(-0.5, 0.5, 1e-2)?)?;
    let sol = dalembert_solve(&data, &grid)?;
    let oracle = characteristic_oracle(&data, &grid)?;
    let diff = sol.nu.values.iter().zip(&oracle.values).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    println!("example-4.2 on [-0.5,0.5]^2, h = 1e-2");
    println!("  loop construction vs oracle: {diff:.3e}");
    println!("  harmonicity residual:        {:.3e}", harmonicity_residual(&sol.nu)?);
    let (i, j) = (grid.nx() / 2, grid.ny() / 2);
    println!("  nu(0,0) = {:?}", sol.nu.at(i, j));
    Ok(())
}
