//! Fourth-order exponential (Magnus) integrators for X' = X A(t) on SL(2,R),
//! and an RK4 integrator for the loop-valued version of the same equation.

use crate::algebra::{bracket, exp_sl, Mat2, SlVec};
use crate::grid::Axis;
use crate::loops::LaurentLoop;

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // sqrt(3)/6

/// One step of signed length h using the two Gauss points.
pub fn magnus_step(x: Mat2, a1: SlVec, a2: SlVec, h: f64) -> Mat2 {
    let omega = (a1 + a2) * (0.5 * h) + bracket(&a1, &a2) * (h * h * 3f64.sqrt() / 12.0);
    renormalize(x * exp_sl(&omega))
}

/// One step between sampled endpoint values a0, a1 with midpoint value am.
pub fn magnus_step_nodes(x: Mat2, a0: SlVec, am: SlVec, a1: SlVec, h: f64) -> Mat2 {
    let omega = (a0 + am * 4.0 + a1) * (h / 6.0) + bracket(&a0, &a1) * (h * h / 12.0);
    renormalize(x * exp_sl(&omega))
}

fn renormalize(x: Mat2) -> Mat2 {
    let d = x.det();
    if d > 0.0 {
        x * (1.0 / d.sqrt())
    } else {
        x
    }
}

/// Integrate X' = X A(t) on the nodes of `axis`, with X = init at node `base`.
pub fn integrate_potential(pot: &dyn Fn(f64) -> SlVec, init: Mat2, axis: &Axis, base: usize) -> Vec<Mat2> {
    let n = axis.len;
    let h = axis.step;
    let mut out = vec![Mat2::zero(); n];
    out[base] = init;
    let c1 = 0.5 - GAUSS_OFFSET;
    let c2 = 0.5 + GAUSS_OFFSET;
    for k in base + 1..n {
        let t = axis.coord(k - 1);
        out[k] = magnus_step(out[k - 1], pot(t + c1 * h), pot(t + c2 * h), h);
    }
    for k in (0..base).rev() {
        let t = axis.coord(k + 1);
        out[k] = magnus_step(out[k + 1], pot(t - c1 * h), pot(t - c2 * h), -h);
    }
    out
}

/// Cubic interpolation of the value halfway between samples k and k+1.
pub fn midpoint_value(a: &[SlVec], k: usize) -> SlVec {
    let n = a.len();
    if n < 4 {
        return (a[k] + a[k + 1]) * 0.5;
    }
    if k == 0 {
        (a[0] * 5.0 + a[1] * 15.0 - a[2] * 5.0 + a[3]) * (1.0 / 16.0)
    } else if k + 2 >= n {
        (a[n - 4] - a[n - 3] * 5.0 + a[n - 2] * 15.0 + a[n - 1] * 5.0) * (1.0 / 16.0)
    } else {
        ((a[k] + a[k + 1]) * 9.0 - a[k - 1] - a[k + 2]) * (1.0 / 16.0)
    }
}

/// Integrate X' = X A from node samples of A (spacing h), X = init at `base`.
pub fn integrate_sampled(a: &[SlVec], h: f64, init: Mat2, base: usize) -> Vec<Mat2> {
    let n = a.len();
    let mut out = vec![Mat2::zero(); n];
    out[base] = init;
    if n == 1 {
        return out;
    }
    for k in base + 1..n {
        let am = midpoint_value(a, k - 1);
        out[k] = magnus_step_nodes(out[k - 1], a[k - 1], am, a[k], h);
    }
    for k in (0..base).rev() {
        let am = midpoint_value(a, k);
        out[k] = magnus_step_nodes(out[k + 1], a[k + 1], am, a[k], -h);
    }
    out
}

/// Integrate the loop equation X' = X A(t, lambda) with classical RK4,
/// keeping degrees in [-degree, degree]. Each grid step is split into
/// `substeps` RK4 steps.
pub fn integrate_loop(
    pot: &(dyn Fn(f64) -> LaurentLoop + Sync),
    init: Mat2,
    axis: &Axis,
    base: usize,
    degree: i32,
    substeps: usize,
) -> Vec<LaurentLoop> {
    let n = axis.len;
    let mut out = vec![LaurentLoop::identity(); n];
    let start = LaurentLoop::constant(init).truncated(-degree, degree);
    out[base] = start.clone();
    let step = |x: &LaurentLoop, t: f64, h: f64| -> LaurentLoop {
        let mul = |a: &LaurentLoop, b: &LaurentLoop| a.mul_within(b, -degree, degree);
        let am = pot(t + 0.5 * h);
        let k1 = mul(x, &pot(t));
        let k2 = mul(&x.add(&k1.scale(0.5 * h)), &am);
        let k3 = mul(&x.add(&k2.scale(0.5 * h)), &am);
        let k4 = mul(&x.add(&k3.scale(h)), &pot(t + h));
        let incr = k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4);
        x.add(&incr.scale(h / 6.0)).truncated(-degree, degree)
    };
    let hs = axis.step / substeps as f64;
    let mut x = start.clone();
    for k in base + 1..n {
        let t0 = axis.coord(k - 1);
        for s in 0..substeps {
            x = step(&x, t0 + s as f64 * hs, hs);
        }
        out[k] = x.clone();
    }
    let mut x = start;
    for k in (0..base).rev() {
        let t0 = axis.coord(k + 1);
        for s in 0..substeps {
            x = step(&x, t0 - s as f64 * hs, -hs);
        }
        out[k] = x.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{V1, V2, V3};
    use crate::grid::observed_order;

    fn pot(t: f64) -> SlVec {
        SlVec::new(0.3 * t.cos(), 0.8 * (1.0 + t * t).sqrt(), 0.5 * t.sin() - 0.2)
    }

    /// Reference solution by many tiny RK4 steps on the matrix equation.
    fn reference(t_end: f64) -> Mat2 {
        let n = 20000;
        let h = t_end / n as f64;
        let f = |x: Mat2, t: f64| x * pot(t).to_mat();
        let mut x = Mat2::identity();
        for k in 0..n {
            let t = k as f64 * h;
            let k1 = f(x, t);
            let k2 = f(x + k1 * (0.5 * h), t + 0.5 * h);
            let k3 = f(x + k2 * (0.5 * h), t + 0.5 * h);
            let k4 = f(x + k3 * h, t + h);
            x = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        x
    }

    #[test]
    fn magnus_is_fourth_order_both_directions() {
        let exact = reference(1.0);
        let back = reference(-1.0);
        let err = |h: f64| {
            let axis = Axis::from_range(-1.0, 1.0, h).unwrap();
            let base = axis.nearest(0.0);
            let x = integrate_potential(&pot, Mat2::identity(), &axis, base);
            (x[axis.len - 1] - exact).max_abs().max((x[0] - back).max_abs())
        };
        let (e1, e2) = (err(0.1), err(0.05));
        assert!(observed_order(e1, e2, 2.0) > 3.7, "{e1} {e2}");
        assert!(err(0.01) < 1e-8);
    }

    #[test]
    fn sampled_magnus_is_fourth_order() {
        let exact = reference(1.0);
        let back = reference(-1.0);
        let err = |h: f64| {
            let axis = Axis::from_range(-1.0, 1.0, h).unwrap();
            let a: Vec<SlVec> = axis.coords().iter().map(|t| pot(*t)).collect();
            let base = axis.nearest(0.0);
            let x = integrate_sampled(&a, h, Mat2::identity(), base);
            (x[axis.len - 1] - exact).max_abs().max((x[0] - back).max_abs())
        };
        let (e1, e2) = (err(0.1), err(0.05));
        assert!(observed_order(e1, e2, 2.0) > 3.5, "{e1} {e2}");
    }

    #[test]
    fn constant_coefficients() {
        let axis = Axis::from_range(0.0, 1.0, 0.1).unwrap();
        let x = integrate_potential(&|_| SlVec::zero(), Mat2::new(2.0, 1.0, 1.0, 1.0), &axis, 0);
        assert!(x.iter().all(|m| *m == Mat2::new(2.0, 1.0, 1.0, 1.0)));
        let c = 0.7;
        let x = integrate_potential(&|_| V1 * c, Mat2::identity(), &axis, 0);
        for (k, m) in x.iter().enumerate() {
            assert!((*m - exp_sl(&(V1 * (c * axis.coord(k))))).max_abs() < 1e-14);
        }
    }

    #[test]
    fn loop_solution_evaluates_to_matrix_solution() {
        let axis = Axis::from_range(-0.5, 0.5, 0.01).unwrap();
        let lp = |t: f64| {
            LaurentLoop::new(-1, vec![(V3 * (0.4 * t)).to_mat(), (V1 * 0.2).to_mat(), (V2 * -0.5).to_mat()])
        };
        let base = axis.nearest(0.0);
        let xl = integrate_loop(&lp, Mat2::identity(), &axis, base, 20, 1);
        for lambda in [1.0, 0.7, 1.6] {
            let pm = |t: f64| lp(t).eval(lambda).sl_part();
            let xm = integrate_potential(&pm, Mat2::identity(), &axis, base);
            for k in [0, axis.len - 1] {
                assert!((xl[k].eval(lambda) - xm[k]).max_abs() < 1e-9);
            }
        }
    }
}
