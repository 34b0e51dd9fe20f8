//! SL(2,R) frames of maps into H^2.

use crate::algebra::{ad_unimodular, exp_sl, sl_inner, Mat2, SlVec, V1, V2, V3};
use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::loops::{McSplit, McSplitPoint};

/// K with Ad_K e1 = n: a boost about e3 after a boost about e2.
pub fn frame_at_point(n: &SlVec) -> Mat2 {
    let u = -n.v3.asinh();
    let ch = (1.0 + n.v3 * n.v3).sqrt();
    let s = (n.v2 / ch).asinh();
    exp_sl(&(V3 * (0.5 * s))) * exp_sl(&(V2 * (0.5 * u)))
}

/// Frame with Ad_F e1 = n0 and Ad_F e3 = n1 / |n1|.
///
/// Any component of n1 along n0 is ignored.
pub fn adapted_frame_at(n0: &SlVec, n1: &SlVec) -> Result<Mat2> {
    let k0 = frame_at_point(n0);
    let m = ad_unimodular(&k0.adj(), n1);
    let r = (m.v2 * m.v2 + m.v3 * m.v3).sqrt();
    if !(r > 1e-12 * (1.0 + n1.norm())) {
        return Err(Error::DegenerateDerivative { nodes: vec![] });
    }
    let psi = 0.5 * (-m.v2).atan2(m.v3);
    Ok(k0 * exp_sl(&(V1 * psi)))
}

/// Adapted frames of a sampled map and the split of their Maurer-Cartan form.
///
/// Frames are built from nu and its x-derivative (the cache when present);
/// the Maurer-Cartan form uses 4th-order differences of the frame field.
pub fn adapted_frame(nu: &GridField<SlVec>) -> Result<(GridField<Mat2>, McSplit)> {
    let g = nu.grid;
    let nu_x = nu.deriv_x();
    let mut frames = Vec::with_capacity(g.len());
    let mut bad = Vec::new();
    let scale = nu_x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let n = g.index(i, j);
            let d = nu_x[n];
            if !(sl_inner(&d, &d) > 0.0) || d.norm() <= 1e-9 * scale.max(1e-300) {
                bad.push((i, j));
                frames.push(Mat2::identity());
                continue;
            }
            match adapted_frame_at(&nu.values[n], &d) {
                Ok(f) => frames.push(f),
                Err(_) => {
                    bad.push((i, j));
                    frames.push(Mat2::identity());
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::DegenerateDerivative { nodes: bad });
    }
    let field = GridField::new(g, frames);
    let ms = maurer_cartan_split(&field)?;
    Ok((field, ms))
}

/// Split of F^{-1}dF for a frame field with unit determinant.
pub fn maurer_cartan_split(frames: &GridField<Mat2>) -> Result<McSplit> {
    let fx = frames.fd_deriv_x();
    let fy = frames.fd_deriv_y();
    let pts = frames
        .values
        .iter()
        .zip(fx.iter().zip(fy.iter()))
        .map(|(f, (dx, dy))| {
            let inv = f.adj();
            McSplitPoint::from_forms((inv * *dx).sl_part(), (inv * *dy).sl_part())
        })
        .collect();
    McSplit::new(frames.grid, pts)
}

/// Maximum of |Ad_F e1 - nu| over a field, a check that F frames nu.
pub fn frame_defect(frames: &GridField<Mat2>, nu: &GridField<SlVec>) -> f64 {
    frames
        .values
        .iter()
        .zip(nu.values.iter())
        .map(|(f, v)| (ad_unimodular(f, &V1) - *v).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ad_action, H2Point};
    use crate::grid::Grid2;

    #[test]
    fn frame_at_point_examples() {
        assert!((frame_at_point(&V1) - Mat2::identity()).max_abs() < 1e-16);
        let s: f64 = 0.9;
        let k = frame_at_point(&SlVec::new(s.cosh(), s.sinh(), 0.0));
        assert!((k - exp_sl(&(V3 * (0.5 * s)))).max_abs() < 1e-14);
        for p in [SlVec::new(3.0, 1.0, -2.5), SlVec::new(1.0, -0.2, 0.9), SlVec::new(10.0, 7.0, 6.0)] {
            let n = H2Point::normalize(p).unwrap().vec();
            let k = frame_at_point(&n);
            assert!((k.det() - 1.0).abs() < 1e-10);
            assert!((ad_action(&k, &V1).unwrap() - n).norm() < 1e-10 * n.norm());
        }
    }

    #[test]
    fn adapted_frame_at_point() {
        let n0 = H2Point::normalize(SlVec::new(2.0, 0.5, -1.0)).unwrap().vec();
        let raw = SlVec::new(0.3, -1.1, 0.7);
        let n1 = raw - n0 * (-sl_inner(&raw, &n0));
        let f = adapted_frame_at(&n0, &n1).unwrap();
        let unit = n1 * (1.0 / sl_inner(&n1, &n1).sqrt());
        assert!((ad_unimodular(&f, &V1) - n0).norm() < 1e-12);
        assert!((ad_unimodular(&f, &V3) - unit).norm() < 1e-12);
        assert!((f.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_map_is_degenerate() {
        let g = Grid2::square(0.0, 1.0, 0.1).unwrap();
        let nu = GridField::from_fn(g, |_, _| V1);
        assert!(matches!(adapted_frame(&nu), Err(Error::DegenerateDerivative { .. })));
    }

    #[test]
    fn one_variable_map_has_unit_speed_split() {
        let g = Grid2::square(-1.0, 1.0, 0.02).unwrap();
        let nu = GridField::from_fn(g, |x, _| SlVec::new(x.cosh(), 0.0, x.sinh()));
        let (f, ms) = adapted_frame(&nu).unwrap();
        assert!(frame_defect(&f, &nu) < 1e-12);
        for p in &ms.points {
            assert!(p.split_defect() < 1e-12);
            assert!((p.up - V2 * -0.5).norm() < 1e-6);
            assert!(p.vk.norm() < 1e-9 && p.vp.norm() < 1e-9);
        }
    }
}
