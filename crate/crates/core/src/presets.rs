//! Closed-form data sets, addressable by name.

use std::sync::Arc;

use crate::algebra::{Mat2, SlVec};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid2, GridField};
use crate::harmonic::curve::{CauchyData1D, CurveSample, CurveSource, FnCurve, Provenance};

pub const EXAMPLE_3_3: &str = "example-3.3";
pub const EXAMPLE_4_2: &str = "example-4.2";
pub const EXAMPLE_5_7: &str = "example-5.7";
pub const EXAMPLE_6_2: &str = "example-6.2";
pub const GCP_DEMO: &str = "gcp-demo";

pub const NAMES: [&str; 5] = [EXAMPLE_3_3, EXAMPLE_4_2, EXAMPLE_5_7, EXAMPLE_6_2, GCP_DEMO];

/// One-variable map nu(x) = cosh x e1 + sinh x e3 with N1 = nu'.
pub fn example_3_3_curve(t: f64) -> CurveSample {
    let n0 = SlVec::new(t.cosh(), 0.0, t.sinh());
    let d = SlVec::new(t.sinh(), 0.0, t.cosh());
    CurveSample { n0, n0_t: d, n1: d, n1_t: n0 }
}

/// N0 = ((1+t^2), 0, 2t)/(1-t^2), N1 = (2t, 0, 1+t^2)/(1-t^2)^2.
pub fn example_4_2_curve(t: f64) -> CurveSample {
    let w = 1.0 - t * t;
    let n0 = SlVec::new(1.0 + t * t, 0.0, 2.0 * t) * (1.0 / w);
    let g = SlVec::new(2.0 * t, 0.0, 1.0 + t * t);
    let n1 = g * (1.0 / (w * w));
    let n1_t = SlVec::new(2.0, 0.0, 2.0 * t) * (1.0 / (w * w)) + g * (4.0 * t / (w * w * w));
    CurveSample { n0, n0_t: n1 * 2.0, n1, n1_t }
}

/// Printed closed forms attached to the worked examples.
pub mod printed {
    use super::*;

    /// Frame claimed for the one-variable example.
    pub fn x_3_3(x: f64) -> Mat2 {
        let c = x.cosh().sqrt();
        Mat2::new(c, -x.sinh() / c, 0.0, 1.0 / c)
    }

    /// Potential coefficient A(x) = (tanh x e3 - sech x e2)/2 of that example.
    pub fn a_3_3(x: f64) -> SlVec {
        SlVec::new(0.0, -0.5 / x.cosh(), 0.5 * x.tanh())
    }

    pub fn nu_3_3(x: f64) -> Mat2 {
        Mat2::new(-x.sinh(), -x.cosh(), x.cosh(), x.sinh())
    }

    /// Coefficient a of the Cauchy-problem example as printed.
    pub fn a_4_2(t: f64) -> f64 {
        2.0 * t / (1.0 - t * t).powi(2)
    }

    pub fn b_4_2(t: f64) -> f64 {
        1.0 / (1.0 - t * t).powi(2)
    }

    /// Printed harmonic map of the Cauchy-problem example (not on H^2).
    pub fn nu_4_2(x: f64, y: f64) -> SlVec {
        let d = 1.0 - x * y;
        SlVec::new(1.0 + x * y, 0.0, x + y) * (1.0 / d)
    }

    /// H^2-normalisation of the printed map.
    pub fn nu_4_2_normalized(x: f64, y: f64) -> SlVec {
        let s = ((1.0 - x * x) * (1.0 - y * y)).sqrt();
        SlVec::new(1.0 + x * y, 0.0, x + y) * (1.0 / s)
    }

    /// Printed frame of the Case 2 example, adapted to cosh x e1 + sinh x e3.
    pub fn frame_5_7(x: f64) -> Mat2 {
        let c = x.cosh().sqrt();
        Mat2::new(1.0 / c, -x.sinh() / c, 0.0, c)
    }

    /// Printed Maurer-Cartan form of that frame (dx component).
    pub fn alpha_5_7(x: f64) -> SlVec {
        SlVec::new(1.0 / x.cosh(), -1.0 / x.cosh(), x.tanh()) * 0.5
    }

    /// Printed surface of the Case 2 example in (e0, e1, e2, e3) coordinates.
    pub fn surface_5_7(theta: f64, x: f64, y: f64) -> Mat2 {
        let (c, s) = (theta.cos(), theta.sin());
        let (p, m) = (0.5 * (x + y), 0.5 * (x - y));
        Mat2::from_basis([c * p.cosh(), s * m.cosh(), c * p.sinh(), s * m.sinh()])
    }

    /// Printed value of [nu_x, omega] for that example.
    pub fn bracket_5_7(b: f64, x: f64) -> SlVec {
        SlVec::new(x.cosh(), 0.0, x.sinh()) * (-2.0 * b)
    }

    /// Printed frame of the Cauchy-problem example.
    pub fn frame_4_2(x: f64, y: f64) -> Mat2 {
        let d = 1.0 - x * y;
        Mat2::new(1.0, x, y, 1.0) * (1.0 / d)
    }
}

/// Gauss map cosh x e1 + sinh x e3 of the Case 2 example, with exact
/// derivative caches.
pub fn example_5_7_nu(grid: Grid2) -> GridField<SlVec> {
    let nu = GridField::from_fn(grid, |x, _| SlVec::new(x.cosh(), 0.0, x.sinh()));
    let dx = GridField::from_fn(grid, |x, _| SlVec::new(x.sinh(), 0.0, x.cosh())).values;
    nu.with_derivatives(dx, vec![SlVec::default(); grid.len()])
}

pub fn example_5_7_frames(grid: Grid2) -> GridField<Mat2> {
    GridField::from_fn(grid, |x, _| printed::frame_5_7(x))
}

/// Coefficients (A, B) = (cos 2 theta, sin 2 theta)/4 of the Case 2 example.
pub fn example_5_7_coefficients(theta: f64) -> (f64, f64) {
    (0.25 * (2.0 * theta).cos(), 0.25 * (2.0 * theta).sin())
}

/// Reason a rectangle meets the singular set of a data set (|t| = 1 and
/// xy = 1 for the rational examples), if it does.
pub fn singular_set_hit(name: &str, x: [f64; 2], y: [f64; 2]) -> Option<String> {
    match name {
        EXAMPLE_4_2 | EXAMPLE_6_2 => {
            let m = x[0].abs().max(x[1].abs()).max(y[0].abs()).max(y[1].abs());
            (m >= 1.0).then(|| format!("{name} is singular on |x| = 1, |y| = 1 and xy = 1"))
        }
        _ => None,
    }
}

/// Registered Cauchy data by name.
pub fn cauchy_source(name: &str) -> Result<Arc<dyn CurveSource>> {
    match name {
        EXAMPLE_3_3 => Ok(Arc::new(FnCurve { f: example_3_3_curve, domain: (-20.0, 20.0) })),
        EXAMPLE_4_2 => Ok(Arc::new(FnCurve { f: example_4_2_curve, domain: (-0.99, 0.99) })),
        EXAMPLE_6_2 | GCP_DEMO => {
            let g = crate::gcp::preset(name, None)?;
            let (cd_src, _) = crate::gcp::translated_source(&g)?;
            Ok(cd_src)
        }
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

pub fn cauchy_data(name: &str, axis: Axis) -> Result<CauchyData1D> {
    CauchyData1D::from_source(cauchy_source(name)?, axis, Provenance::Preset(name.to_string()))
}
