//! Parallel surfaces f^t = f cos t + N sin t with normal N cos t - f sin t.
//!
//! Curvatures use the intrinsic K = det S - 1 and H = trace(S)/2. With the
//! Weingarten matrix M = II I^{-1} the tangent map of the parallel surface is
//! cos t - sin t M, so a node is regular iff
//! K sin^2 t - H sin 2t + 1 = det(cos t - sin t M) is nonzero.

use crate::algebra::{gl_inner, Mat2};
use crate::error::{Error, Result};
use crate::grid::{diff1_o4, Axis};
use crate::surfaces::{fundamental_forms, SurfaceField};

/// Nodes with |det(cos t - sin t M)| at or below this are masked.
pub const SINGULAR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelSurface {
    pub theta: f64,
    /// Masked (singular) nodes carry NaN.
    pub surface: SurfaceField,
    /// true where the parallel surface is regular.
    pub mask: Vec<bool>,
}

impl ParallelSurface {
    pub fn regular_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }
}

/// (f cos t + N sin t, N cos t - f sin t)
pub fn parallel_point(f: &Mat2, n: &Mat2, theta: f64) -> (Mat2, Mat2) {
    let (c, s) = (theta.cos(), theta.sin());
    (*f * c + *n * s, *n * c - *f * s)
}

pub fn parallel_surface(sf: &SurfaceField, theta: f64) -> Result<ParallelSurface> {
    let geo = fundamental_forms(sf)?;
    let (c, s) = (theta.cos(), theta.sin());
    let mut out = sf.clone();
    let mut mask = Vec::with_capacity(sf.f.len());
    for k in 0..sf.f.len() {
        let kp1 = geo.k_plus_one[k];
        let h = geo.mean[k];
        let det = c * c - 2.0 * s * c * h + s * s * kp1;
        let ok = det.is_finite() && det.abs() > SINGULAR_TOL;
        mask.push(ok);
        if ok {
            let (fp, np) = parallel_point(&sf.f[k], &sf.normal[k], theta);
            out.f[k] = fp;
            out.normal[k] = np;
        } else {
            out.f[k] = Mat2::scalar(f64::NAN);
            out.normal[k] = Mat2::scalar(f64::NAN);
        }
    }
    if !mask.iter().any(|m| *m) {
        return Err(Error::FullySingular);
    }
    Ok(ParallelSurface { theta, surface: out, mask })
}

/// Transformed (K, H) as printed:
/// K' = (K cos 2t + 2H sin 2t) / D, H' = (K sin t cos t - H cos 2t) / D with
/// D = K sin^2 t - H sin 2t + 1. This H' belongs to the normal f sin t - N cos t.
pub fn parallel_curvatures(k: f64, h: f64, theta: f64) -> Result<(f64, f64)> {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    let d = k * s * s - h * s2 + 1.0;
    if !(d.abs() > 1e-12) {
        return Err(Error::SingularAngle(d));
    }
    Ok(((k * c2 + 2.0 * h * s2) / d, (k * s * c - h * c2) / d))
}

/// Angle in (0, pi/2) with tan 2t = 1/H, and the constant K of the parallel
/// surface, 1/tan^2 t - 1.
pub fn theta_for_cgc(h: f64) -> (f64, f64) {
    let theta = 0.5 * 1.0f64.atan2(h);
    (theta, 1.0 / theta.tan().powi(2) - 1.0)
}

/// Angle in (0, pi/2) with tan^2 t = 1/(K+1), and the constant H of the
/// parallel surface, 1/tan 2t.
pub fn theta_for_cmc(k: f64) -> Result<(f64, f64)> {
    let kp1 = k + 1.0;
    if !(kp1 > 0.0) {
        return Err(Error::NoRealAngle(kp1));
    }
    let theta = (1.0 / kp1.sqrt()).atan();
    Ok((theta, 1.0 / (2.0 * theta).tan()))
}

/// A curve in AdS3 with a unit normal of a surface along it.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFrames {
    pub axis: Axis,
    pub f: Vec<Mat2>,
    pub normal: Vec<Mat2>,
}

impl CurveFrames {
    /// Gauss map f^{-1} N.
    pub fn gauss_map(&self) -> Vec<crate::algebra::SlVec> {
        self.f.iter().zip(&self.normal).map(|(f, n)| (f.adj() * *n).sl_part()).collect()
    }

    /// Largest |<f^{-1} f_t, nu>| and smallest <f_t, f_t>.
    pub fn invariants(&self) -> (f64, f64) {
        let ft = diff1_o4(&self.f, self.axis.step);
        let mut orth: f64 = 0.0;
        let mut speed = f64::INFINITY;
        for k in 0..self.f.len() {
            orth = orth.max(gl_inner(&ft[k], &self.normal[k]).abs());
            speed = speed.min(gl_inner(&ft[k], &ft[k]));
        }
        (orth, speed)
    }
}

/// Move curve data along a CMC surface with mean curvature H to the
/// parallel surface at distance theta (tan 2 theta = 1/H). `mean` = None
/// skips that check, as for the inverse transfer.
pub fn gcp_transfer(data: &CurveFrames, theta: f64, mean: Option<f64>) -> Result<CurveFrames> {
    if let Some(h) = mean {
        let want = theta_for_cgc(h).0;
        let d = (theta - want).rem_euclid(std::f64::consts::FRAC_PI_2);
        if d.min(std::f64::consts::FRAC_PI_2 - d) > 1e-9 {
            return Err(Error::PreconditionViolated(format!("tan(2 theta) != 1/H for theta = {theta}, H = {h}")));
        }
    }
    let mut out = CurveFrames { axis: data.axis, f: Vec::new(), normal: Vec::new() };
    for (f, n) in data.f.iter().zip(&data.normal) {
        let (fp, np) = parallel_point(f, n, theta);
        out.f.push(fp);
        out.normal.push(np);
    }
    let ft = diff1_o4(&out.f, data.axis.step);
    let worst = ft.iter().map(|v| gl_inner(v, v)).fold(f64::INFINITY, f64::min);
    if !(worst > 1e-12) {
        return Err(Error::SingularAngle(worst));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exp_sl, V1, V2};
    use std::f64::consts::PI;

    #[test]
    fn closed_form_angles() {
        let (t, k) = theta_for_cgc(1.0);
        assert!((t - PI / 8.0).abs() < 1e-15);
        assert!((k - (1.0 / (PI / 8.0).tan().powi(2) - 1.0)).abs() < 1e-12);
        assert!((theta_for_cgc(0.0).0 - PI / 4.0).abs() < 1e-15);
        assert!(theta_for_cgc(1e12).0 < 1e-11);
        let (t, h) = theta_for_cmc(0.0).unwrap();
        assert!((t - PI / 4.0).abs() < 1e-15 && h.abs() < 1e-15);
        let (t, h) = theta_for_cmc(2.0).unwrap();
        assert!((t - PI / 6.0).abs() < 1e-15 && (h - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(matches!(theta_for_cmc(-26.0), Err(Error::NoRealAngle(_))));
    }

    #[test]
    fn printed_laws_at_zero_and_singular() {
        let (k, h) = parallel_curvatures(-0.3, 0.7, 0.0).unwrap();
        assert_eq!((k, h), (-0.3, -0.7));
        // K sin^2 t - H sin 2t + 1 = 0 at t = pi/4 for K = 2H - 2
        assert!(matches!(parallel_curvatures(0.0, 1.0, PI / 4.0), Err(Error::SingularAngle(_))));
    }

    #[test]
    fn transfer_round_trip() {
        let axis = Axis::from_range(-1.0, 1.0, 0.05).unwrap();
        let f: Vec<Mat2> = axis.coords().iter().map(|t| exp_sl(&(V2 * *t))).collect();
        let n = vec![V1.to_mat(); f.len()];
        let data = CurveFrames { axis, f, normal: n };
        let (theta, _) = theta_for_cgc(0.0);
        let moved = gcp_transfer(&data, theta, Some(0.0)).unwrap();
        let back = gcp_transfer(&moved, -theta, None).unwrap();
        for k in 0..data.f.len() {
            assert!((back.f[k] - data.f[k]).max_abs() < 1e-12);
            assert!((back.normal[k] - data.normal[k]).max_abs() < 1e-12);
        }
        let (orth, speed) = moved.invariants();
        assert!(orth < 1e-6 && speed > 0.0);
        assert!(gcp_transfer(&data, 0.3, Some(0.0)).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::algebra::{exp_sl, H2Point, SlVec};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn transfer_by_minus_theta_returns(
            g in proptest::array::uniform3(-1.0..1.0f64),
            n in proptest::array::uniform3(-1.0..1.0f64),
            theta in -1.5..1.5f64,
        ) {
            let f = exp_sl(&SlVec::new(g[0], g[1], g[2]));
            let nu = H2Point::normalize(SlVec::new(1.5 + n[0].abs(), n[1], n[2])).unwrap().vec();
            let normal = f * nu.to_mat();
            let (fp, np) = parallel_point(&f, &normal, theta);
            prop_assert!((gl_inner(&fp, &fp) + 1.0).abs() <= 1e-12);
            let (fb, nb) = parallel_point(&fp, &np, -theta);
            prop_assert!((fb - f).max_abs() <= 1e-12 && (nb - normal).max_abs() <= 1e-12);
        }
    }
}
