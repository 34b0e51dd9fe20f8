//! Frame coefficients along the diagonal and the one-variable potential
//! built from them.
//!
//! In the adapted frame along x = y (Ad_F e1 = N0, Ad_F e3 = N1/|N1|) the
//! lambda-dependent potential is
//!   c e1 + lambda (-mu/2) e2 + lambda^{-1} (a e3 - b e2)/2,
//! with mu = |N1|, a = <N0', [n1, N0]>/2, b = <n1, N0' - N1>,
//! c = -<n1', [n1, N0]>/4 and n1 = N1/mu. A stabiliser gauge exp(theta e1)
//! shifts c by theta' and rotates the e2/e3 parts.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{ad_unimodular, bracket, exp_sl, sl_inner, Mat2, SlVec, V1, V2, V3};
use crate::error::{Error, Result};
use crate::harmonic::curve::{CauchyData1D, CurveSample, CurveSource};
use crate::loops::LaurentLoop;

/// Speeds |N1| below this are singular.
pub const SPEED_TOL: f64 = 1e-10;

/// Coefficients at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// |N1|
    pub speed: f64,
    /// <N1, N0' - N1>
    pub nondegeneracy: f64,
    /// <N1, 2 N0' - N1>
    pub nondegeneracy_doubled: f64,
}

pub fn abc_at(s: &CurveSample) -> Result<AbcPoint> {
    let q = sl_inner(&s.n1, &s.n1);
    if !(q > SPEED_TOL * SPEED_TOL) {
        return Err(Error::SingularData(format!("|N1|^2 = {q:e}")));
    }
    let mu = q.sqrt();
    let n1 = s.n1 * (1.0 / mu);
    let mu_t = sl_inner(&s.n1, &s.n1_t) / mu;
    let n1_t = s.n1_t * (1.0 / mu) - s.n1 * (mu_t / (mu * mu));
    let frame_bracket = bracket(&n1, &s.n0);
    Ok(AbcPoint {
        a: 0.5 * sl_inner(&s.n0_t, &frame_bracket),
        b: sl_inner(&n1, &s.nu_y()),
        c: -0.25 * sl_inner(&n1_t, &frame_bracket),
        speed: mu,
        nondegeneracy: s.nondegeneracy(),
        nondegeneracy_doubled: s.nondegeneracy_doubled(),
    })
}

/// A stabiliser gauge exp(theta(t) e1), given as t -> (theta, theta').
#[derive(Clone)]
pub struct Gauge(pub Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>);

impl fmt::Debug for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Gauge(..)")
    }
}

/// Sampled coefficients plus the data needed to evaluate the potential
/// anywhere on the parameter interval.
#[derive(Clone)]
pub struct AbcCoefficients {
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub speed: Vec<f64>,
    pub nondegeneracy: Vec<f64>,
    pub nondegeneracy_doubled: Vec<f64>,
    source: Arc<dyn CurveSource>,
    gauges: Vec<Gauge>,
}

impl fmt::Debug for AbcCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbcCoefficients")
            .field("t", &self.t)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("c", &self.c)
            .field("gauges", &self.gauges.len())
            .finish_non_exhaustive()
    }
}

/// The lambda^{-1}, lambda^0, lambda^1 coefficients of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialCoeffs {
    pub minus: SlVec,
    pub zero: SlVec,
    pub plus: SlVec,
}

impl PotentialCoeffs {
    pub fn to_loop(&self) -> LaurentLoop {
        LaurentLoop::new(-1, vec![self.minus.to_mat(), self.zero.to_mat(), self.plus.to_mat()])
    }

    pub fn at_one(&self) -> SlVec {
        self.minus + self.zero + self.plus
    }
}

pub fn abc_from_data(cd: &CauchyData1D) -> Result<AbcCoefficients> {
    let mut out = AbcCoefficients {
        t: cd.axis.coords(),
        a: vec![],
        b: vec![],
        c: vec![],
        speed: vec![],
        nondegeneracy: vec![],
        nondegeneracy_doubled: vec![],
        source: cd.source(),
        gauges: vec![],
    };
    for (k, s) in cd.samples.iter().enumerate() {
        let p = abc_at(s).map_err(|e| match e {
            Error::SingularData(m) => Error::SingularData(format!("{m} at t = {}", out.t[k])),
            e => e,
        })?;
        out.a.push(p.a);
        out.b.push(p.b);
        out.c.push(p.c);
        out.speed.push(p.speed);
        out.nondegeneracy.push(p.nondegeneracy);
        out.nondegeneracy_doubled.push(p.nondegeneracy_doubled);
    }
    Ok(out)
}

/// Apply the gauge exp(theta e1): c becomes c + theta', a and b are unchanged.
pub fn gauge_shift(abc: &AbcCoefficients, theta: Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>) -> AbcCoefficients {
    let mut out = abc.clone();
    for (k, t) in abc.t.iter().enumerate() {
        out.c[k] += theta(*t).1;
    }
    out.gauges.push(Gauge(theta));
    out
}

impl AbcCoefficients {
    pub fn source(&self) -> Arc<dyn CurveSource> {
        self.source.clone()
    }

    /// Accumulated gauge angle and its derivative.
    pub fn gauge_angle(&self, t: f64) -> (f64, f64) {
        self.gauges.iter().fold((0.0, 0.0), |(a, d), g| {
            let (x, y) = (g.0)(t);
            (a + x, d + y)
        })
    }

    /// Potential coefficients at parameter t.
    pub fn potential(&self, t: f64) -> Result<PotentialCoeffs> {
        let p = abc_at(&self.source.sample(t))?;
        let (theta, dtheta) = self.gauge_angle(t);
        let rot = exp_sl(&(V1 * -theta));
        Ok(PotentialCoeffs {
            minus: ad_unimodular(&rot, &((V3 * p.a - V2 * p.b) * 0.5)),
            zero: V1 * (p.c + dtheta),
            plus: ad_unimodular(&rot, &(V2 * (-0.5 * p.speed))),
        })
    }

    /// Initial frame at t: the adapted frame composed with the gauge.
    pub fn initial_frame(&self, t: f64) -> Result<Mat2> {
        let s = self.source.sample(t);
        let k = crate::harmonic::frame::adapted_frame_at(&s.n0, &s.n1)?;
        let (theta, _) = self.gauge_angle(t);
        Ok(k * exp_sl(&(V1 * theta)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::H2Point;
    use crate::grid::Axis;
    use crate::harmonic::curve::{FnCurve, Provenance};

    fn wavy(t: f64) -> CurveSample {
        // N0 = normalised (2 + t^2, sin t, t/2), N1 = tilted normal of non-unit length
        let raw = |t: f64| SlVec::new(2.0 + t * t, t.sin(), 0.5 * t);
        let n0 = |t: f64| H2Point::normalize(raw(t)).unwrap().vec();
        let n1 = |t: f64| {
            let w = SlVec::new(0.0, 1.0 + 0.3 * t, (2.0 * t).cos());
            let n = n0(t);
            (w + n * sl_inner(&w, &n)) * (1.0 + 0.2 * t * t)
        };
        let d = |f: &dyn Fn(f64) -> SlVec, t: f64| {
            let e = 1e-3;
            (f(t - 2.0 * e) - f(t + 2.0 * e) + (f(t + e) - f(t - e)) * 8.0) * (1.0 / (12.0 * e))
        };
        CurveSample { n0: n0(t), n0_t: d(&n0, t), n1: n1(t), n1_t: d(&n1, t) }
    }

    #[test]
    fn coefficients_match_frame_derivative() {
        // the potential at lambda = 1 is F^{-1}F' for the adapted frame along the curve
        for t in [-0.4, 0.1, 0.7] {
            let s = wavy(t);
            let p = abc_at(&s).unwrap();
            let f = |t: f64| {
                let s = wavy(t);
                crate::harmonic::frame::adapted_frame_at(&s.n0, &s.n1).unwrap()
            };
            let e = 1e-4;
            let df = (f(t + e) - f(t - e)) * (1.0 / (2.0 * e));
            let form = (f(t).adj() * df).sl_part();
            assert!((form.v1 - p.c).abs() < 1e-5, "c {} vs {}", form.v1, p.c);
            let want = V1 * p.c + V2 * (-0.5 * p.speed) + (V3 * p.a - V2 * p.b) * 0.5;
            assert!((form - want).norm() < 1e-5);
        }
    }

    #[test]
    fn gauge_shift_changes_only_c() {
        let axis = Axis::from_range(-0.5, 0.5, 0.1).unwrap();
        let cd = CauchyData1D::from_source(Arc::new(FnCurve { f: wavy, domain: (-1.0, 1.0) }), axis, Provenance::Tabulated)
            .unwrap();
        let abc = abc_from_data(&cd).unwrap();
        let zero = gauge_shift(&abc, Arc::new(|_| (0.0, 0.0)));
        assert_eq!(zero.c, abc.c);
        let g1 = gauge_shift(&abc, Arc::new(|t: f64| (t * t, 2.0 * t)));
        let g2 = gauge_shift(&g1, Arc::new(|t: f64| (t.sin(), t.cos())));
        assert_eq!(g2.a, abc.a);
        assert_eq!(g2.b, abc.b);
        for (k, t) in abc.t.iter().enumerate() {
            assert!((g2.c[k] - abc.c[k] - 2.0 * t - t.cos()).abs() < 1e-14);
        }
        // gauged potential is the gauge transform of the original
        let t = 0.3;
        let p0 = abc.potential(t).unwrap();
        let p1 = g1.potential(t).unwrap();
        let g = exp_sl(&(V1 * (t * t)));
        let want = ad_unimodular(&g.adj(), &p0.at_one()) + V1 * (2.0 * t);
        assert!((p1.at_one() - want).norm() < 1e-13);
    }

    #[test]
    fn singular_speed() {
        let s = CurveSample { n0: V1, ..Default::default() };
        assert!(matches!(abc_at(&s), Err(Error::SingularData(_))));
    }
}
