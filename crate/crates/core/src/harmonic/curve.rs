//! One-variable Cauchy data: a curve N0 in H^2 with a spacelike normal
//! field N1 (the prescribed x-derivative along the diagonal x = y).

use std::fmt;
use std::sync::Arc;

use crate::algebra::{bracket, sl_inner, SlVec, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::grid::{diff1_o4, diff2_o4, Axis};

/// N0, N1 and their t-derivatives at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveSample {
    pub n0: SlVec,
    pub n0_t: SlVec,
    pub n1: SlVec,
    pub n1_t: SlVec,
}

impl CurveSample {
    /// Diagonal value of nu_y.
    pub fn nu_y(&self) -> SlVec {
        self.n0_t - self.n1
    }

    /// <N1, N0' - N1>; the solver divides by it.
    pub fn nondegeneracy(&self) -> f64 {
        sl_inner(&self.n1, &self.nu_y())
    }

    /// <N1, 2 N0' - N1>.
    pub fn nondegeneracy_doubled(&self) -> f64 {
        sl_inner(&self.n1, &(self.n0_t * 2.0 - self.n1))
    }

    /// <N0', [N1, N0]>.
    pub fn raw_a(&self) -> f64 {
        sl_inner(&self.n0_t, &bracket(&self.n1, &self.n0))
    }
}

/// Curve data that can be evaluated at any parameter in its domain.
pub trait CurveSource: Send + Sync {
    fn sample(&self, t: f64) -> CurveSample;
    /// Closed interval on which `sample` is valid.
    fn domain(&self) -> (f64, f64);
}

/// Curve data given by closures.
pub struct FnCurve<F: Fn(f64) -> CurveSample + Send + Sync> {
    pub f: F,
    pub domain: (f64, f64),
}

impl<F: Fn(f64) -> CurveSample + Send + Sync> CurveSource for FnCurve<F> {
    fn sample(&self, t: f64) -> CurveSample {
        (self.f)(t)
    }
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

/// Sampled data with 4th-order differences and cubic Hermite interpolation.
pub struct TabulatedCurve {
    axis: Axis,
    n0: Vec<SlVec>,
    n1: Vec<SlVec>,
    n0_t: Vec<SlVec>,
    n1_t: Vec<SlVec>,
    n0_tt: Vec<SlVec>,
    n1_tt: Vec<SlVec>,
}

impl TabulatedCurve {
    pub fn new(axis: Axis, n0: Vec<SlVec>, n1: Vec<SlVec>) -> Result<Self> {
        if n0.len() != axis.len || n1.len() != axis.len {
            return Err(Error::PreconditionViolated("sample count does not match axis".into()));
        }
        if axis.len < 9 {
            return Err(Error::GridTooSmall { need: 9, got: axis.len });
        }
        let h = axis.step;
        Ok(TabulatedCurve {
            axis,
            n0_t: diff1_o4(&n0, h),
            n1_t: diff1_o4(&n1, h),
            n0_tt: diff2_o4(&n0, h),
            n1_tt: diff2_o4(&n1, h),
            n0,
            n1,
        })
    }
}

fn hermite(p0: SlVec, m0: SlVec, p1: SlVec, m1: SlVec, s: f64, h: f64) -> SlVec {
    let s2 = s * s;
    let s3 = s2 * s;
    p0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * (h * (s3 - 2.0 * s2 + s)) + p1 * (3.0 * s2 - 2.0 * s3) + m1 * (h * (s3 - s2))
}

impl CurveSource for TabulatedCurve {
    fn sample(&self, t: f64) -> CurveSample {
        let h = self.axis.step;
        let u = ((t - self.axis.start) / h).clamp(0.0, (self.axis.len - 1) as f64);
        let k = (u.floor() as usize).min(self.axis.len - 2);
        let s = u - k as f64;
        let at = |v: &[SlVec], d: &[SlVec]| hermite(v[k], d[k], v[k + 1], d[k + 1], s, h);
        CurveSample {
            n0: at(&self.n0, &self.n0_t),
            n1: at(&self.n1, &self.n1_t),
            n0_t: at(&self.n0_t, &self.n0_tt),
            n1_t: at(&self.n1_t, &self.n1_tt),
        }
    }

    fn domain(&self) -> (f64, f64) {
        (self.axis.start, self.axis.end())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Preset(String),
    Tabulated,
}

/// Summary of the invariant checks on a Cauchy data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveDiagnostics {
    pub max_membership_defect: f64,
    pub max_orthogonality_defect: f64,
    pub min_n1_norm_sq: f64,
    pub max_abs_nondegeneracy: f64,
    pub max_abs_nondegeneracy_doubled: f64,
}

#[derive(Clone)]
pub struct CauchyData1D {
    pub axis: Axis,
    pub samples: Vec<CurveSample>,
    pub provenance: Provenance,
    source: Arc<dyn CurveSource>,
}

impl fmt::Debug for CauchyData1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyData1D")
            .field("axis", &self.axis)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl CauchyData1D {
    pub fn from_source(source: Arc<dyn CurveSource>, axis: Axis, provenance: Provenance) -> Result<Self> {
        let (lo, hi) = source.domain();
        if axis.start < lo - 1e-12 || axis.end() > hi + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "parameter range [{}, {}] leaves the data domain [{lo}, {hi}]",
                axis.start,
                axis.end()
            )));
        }
        let samples = axis.coords().iter().map(|t| source.sample(*t)).collect();
        let cd = CauchyData1D { axis, samples, provenance, source };
        cd.validate()?;
        Ok(cd)
    }

    /// Data from samples of N0 and N1; derivatives by 4th-order differences.
    pub fn tabulated(axis: Axis, n0: Vec<SlVec>, n1: Vec<SlVec>) -> Result<Self> {
        let src = TabulatedCurve::new(axis, n0, n1)?;
        CauchyData1D::from_source(Arc::new(src), axis, Provenance::Tabulated)
    }

    pub fn source(&self) -> Arc<dyn CurveSource> {
        self.source.clone()
    }

    pub fn sample(&self, t: f64) -> CurveSample {
        self.source.sample(t)
    }

    pub fn diagnostics(&self) -> CurveDiagnostics {
        let mut d = CurveDiagnostics {
            max_membership_defect: 0.0,
            max_orthogonality_defect: 0.0,
            min_n1_norm_sq: f64::INFINITY,
            max_abs_nondegeneracy: 0.0,
            max_abs_nondegeneracy_doubled: 0.0,
        };
        for s in &self.samples {
            d.max_membership_defect = d.max_membership_defect.max((sl_inner(&s.n0, &s.n0) + 1.0).abs());
            let scale = s.n0.norm() * s.n1.norm();
            d.max_orthogonality_defect = d.max_orthogonality_defect.max(sl_inner(&s.n0, &s.n1).abs() / scale.max(1.0));
            d.min_n1_norm_sq = d.min_n1_norm_sq.min(sl_inner(&s.n1, &s.n1));
            d.max_abs_nondegeneracy = d.max_abs_nondegeneracy.max(s.nondegeneracy().abs());
            d.max_abs_nondegeneracy_doubled = d.max_abs_nondegeneracy_doubled.max(s.nondegeneracy_doubled().abs());
        }
        d
    }

    fn validate(&self) -> Result<()> {
        for (k, s) in self.samples.iter().enumerate() {
            let t = self.axis.coord(k);
            if !(s.n0.is_finite() && s.n1.is_finite() && s.n0_t.is_finite() && s.n1_t.is_finite()) {
                return Err(Error::PreconditionViolated(format!("non-finite data at t = {t}")));
            }
            let m = (sl_inner(&s.n0, &s.n0) + 1.0).abs();
            if m > MEMBERSHIP_TOL * s.n0.norm().powi(2).max(1.0) || s.n0.v1 <= 0.0 {
                return Err(Error::PreconditionViolated(format!("N0 is not on H^2 at t = {t}")));
            }
            let o = sl_inner(&s.n0, &s.n1).abs();
            if o > MEMBERSHIP_TOL * (s.n0.norm() * s.n1.norm()).max(1.0) {
                return Err(Error::PreconditionViolated(format!("<N1, N0> = {o:e} at t = {t}")));
            }
            if !(sl_inner(&s.n1, &s.n1) > 0.0) {
                return Err(Error::SingularData(format!("N1 is not spacelike at t = {t}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(t: f64) -> CurveSample {
        CurveSample {
            n0: SlVec::new(t.cosh(), 0.0, t.sinh()),
            n0_t: SlVec::new(t.sinh(), 0.0, t.cosh()),
            n1: SlVec::new(t.sinh(), 0.3, t.cosh()),
            n1_t: SlVec::new(t.cosh(), 0.0, t.sinh()),
        }
    }

    #[test]
    fn tabulated_interpolation_is_accurate() {
        let axis = Axis::from_range(-1.0, 1.0, 0.02).unwrap();
        let n0 = axis.coords().iter().map(|t| curve(*t).n0).collect();
        let n1 = axis.coords().iter().map(|t| curve(*t).n1).collect();
        let tab = TabulatedCurve::new(axis, n0, n1).unwrap();
        for t in [-0.987, -0.31, 0.0, 0.4441, 0.99] {
            let a = tab.sample(t);
            let b = curve(t);
            assert!((a.n0 - b.n0).norm() < 1e-8);
            assert!((a.n0_t - b.n0_t).norm() < 1e-6);
            assert!((a.n1_t - b.n1_t).norm() < 1e-6);
        }
    }

    #[test]
    fn validation() {
        let axis = Axis::from_range(-1.0, 1.0, 0.1).unwrap();
        let good = Arc::new(FnCurve { f: |t: f64| { let mut s = curve(t); s.n1.v2 = 0.0; s }, domain: (-2.0, 2.0) });
        let cd = CauchyData1D::from_source(good, axis, Provenance::Preset("test".into())).unwrap();
        assert!(cd.diagnostics().max_abs_nondegeneracy < 1e-14);
        let tilted = Arc::new(FnCurve { f: curve, domain: (-2.0, 2.0) });
        assert!(CauchyData1D::from_source(tilted, axis, Provenance::Tabulated).is_ok());
        let off = Arc::new(FnCurve {
            f: |t: f64| CurveSample { n1: SlVec::new(1.0, 0.0, 0.0), ..curve(t) },
            domain: (-2.0, 2.0),
        });
        assert!(CauchyData1D::from_source(off, axis, Provenance::Tabulated).is_err());
        let narrow = Arc::new(FnCurve { f: curve, domain: (-0.5, 0.5) });
        assert!(matches!(
            CauchyData1D::from_source(narrow, axis, Provenance::Tabulated),
            Err(Error::InvalidParameter(_))
        ));
    }
}
