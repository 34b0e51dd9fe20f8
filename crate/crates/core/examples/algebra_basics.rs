//! The matrix models: sl(2) as R^{2,1}, H^2 inside it, SL(2) as AdS3.

use adslf::algebra::*;
use adslf::io::project_r3;

fn main() {
    let x = SlVec::new(0.3, 1.2, -0.4);
    let y = SlVec::new(1.0, 0.2, 0.7);
    println!("<X,X> = {:+.6}  -det X = {:+.6}", sl_inner(&x, &x), -x.to_mat().det());
    println!("[X,Y] = {:?}", bracket(&x, &y));

    // Z orthogonal to X and Y satisfies the bracket identities
    let z = orthogonal_projection(&SlVec::new(0.5, -0.1, 0.9), &x, &y).expect("X, Y span a plane");
    let r = bracket_identities_check(&x, &y, &z).expect("Z is orthogonal");
    println!("bracket identity residuals: {:?}", r);

    let g = exp_sl(&(V2 * 0.4 + V3 * -0.2));
    println!("exp(X) in SL(2): det = {:.15}", g.det());

    let n = H2Point::normalize(SlVec::new(2.0, 0.5, -1.0)).expect("timelike, future sheet");
    println!("point of H^2 {:?}, <n,n> = {:.15}", n.vec(), sl_inner(&n.vec(), &n.vec()));

    println!("[[1,2],[3,4]] projects to {:?}", project_r3(&Mat2::new(1.0, 2.0, 3.0, 4.0)));
}
