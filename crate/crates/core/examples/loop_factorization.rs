//! Big-cell (LU) factorisation of a matrix and Birkhoff factorisation of a
//! Laurent loop.

use adslf::algebra::Mat2;
use adslf::loops::{big_cell_factor, birkhoff_factor, LaurentLoop};

fn main() -> Result<(), adslf::error::Error> {
    let p = Mat2::new(2.0, 1.0, -0.5, 0.75);
    let (l, u) = big_cell_factor(&p)?;
    println!("L = {l:?}\nU = {u:?}\n|LU - P| = {:e}", (l * u - p).max_abs());
    println!("P11 = 0 rejected: {}", big_cell_factor(&Mat2::new(0.0, 1.0, -1.0, 0.0)).is_err());

    // a near-identity loop of degree 2
    let c = |a, b, c, d| Mat2::new(a, b, c, d);
    let phi = LaurentLoop::new(
        -2,
        vec![
            c(0.01, 0.02, -0.03, 0.0),
            c(0.0, 0.05, 0.04, -0.02),
            Mat2::identity() + c(0.03, -0.01, 0.02, 0.01),
            c(0.02, 0.0, -0.04, 0.03),
            c(-0.01, 0.01, 0.0, 0.02),
        ],
    );
    let f = birkhoff_factor(&phi, 8)?;
    println!("Birkhoff: residual {:e} after {} Newton passes", f.residual, f.newton_passes);
    println!("H-(infinity) = {:?}", f.minus.coeff(0));
    println!("H+(0)        = {:?}", f.plus.coeff(0));
    Ok(())
}
