//! Geometric Cauchy problem: a constant-curvature surface K + 1 = -rho^2
//! containing a prescribed curve f~ with prescribed Gauss map nu~ along it.
//!
//! The curve is placed on the diagonal x = y. With
//! w = -[nu~, f~^{-1} f~_t] / 2 the harmonic Cauchy data are N0 = nu~ and
//! N1 = (rho - 1)/(2 rho) (nu~' + (rho + 1) w).

use std::sync::Arc;

use crate::algebra::{bracket, gl_inner, sl_inner, Mat2, SlVec, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::grid::{diff1_o4, diff2_o4, Axis, Grid2, Linear};
use crate::harmonic::curve::{CauchyData1D, CurveSample, CurveSource, Provenance};
use crate::harmonic::dalembert::{dalembert_solve, diagonal_axis, HarmonicSolution};
use crate::presets::{EXAMPLE_6_2, GCP_DEMO};
use crate::surfaces::{reconstruct_case1, SurfaceField};

/// Step of the difference quotient used for N1'.
pub const N1_DERIV_STEP: f64 = 1e-3;
/// Orthogonality tolerance for sampled curves, above the difference error.
pub const TABULATED_ORTH_TOL: f64 = 1e-6;
/// Fraction of nodes on which the nondegeneracy quantity must not vanish.
pub const NONDEGENERATE_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameCurveSample {
    pub f: Mat2,
    pub f_t: Mat2,
    pub nu: SlVec,
    pub nu_t: SlVec,
}

impl FrameCurveSample {
    /// f^{-1} f_t as an sl(2) vector.
    pub fn tangent(&self) -> SlVec {
        (self.f.adj() * self.f_t).sl_part()
    }

    /// -[nu, f^{-1} f_t] / 2
    pub fn w(&self) -> SlVec {
        bracket(&self.nu, &self.tangent()) * -0.5
    }
}

pub trait FrameCurveSource: Send + Sync {
    fn sample(&self, t: f64) -> FrameCurveSample;
    fn domain(&self) -> (f64, f64);
}

pub struct FnFrameCurve<F: Fn(f64) -> FrameCurveSample + Send + Sync> {
    pub f: F,
    pub domain: (f64, f64),
}

impl<F: Fn(f64) -> FrameCurveSample + Send + Sync> FrameCurveSource for FnFrameCurve<F> {
    fn sample(&self, t: f64) -> FrameCurveSample {
        (self.f)(t)
    }
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

fn hermite<T: Linear>(p0: T, m0: T, p1: T, m1: T, s: f64, h: f64) -> T {
    let s2 = s * s;
    let s3 = s2 * s;
    p0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * (h * (s3 - 2.0 * s2 + s)) + p1 * (3.0 * s2 - 2.0 * s3) + m1 * (h * (s3 - s2))
}

/// Sampled (f, nu) with 4th-order differences and Hermite interpolation.
pub struct TabulatedFrameCurve {
    axis: Axis,
    f: Vec<Mat2>,
    f_t: Vec<Mat2>,
    f_tt: Vec<Mat2>,
    nu: Vec<SlVec>,
    nu_t: Vec<SlVec>,
    nu_tt: Vec<SlVec>,
}

impl TabulatedFrameCurve {
    pub fn new(axis: Axis, f: Vec<Mat2>, nu: Vec<SlVec>) -> Result<Self> {
        if f.len() != axis.len || nu.len() != axis.len {
            return Err(Error::PreconditionViolated("sample count does not match axis".into()));
        }
        if axis.len < 9 {
            return Err(Error::GridTooSmall { need: 9, got: axis.len });
        }
        let h = axis.step;
        Ok(TabulatedFrameCurve {
            axis,
            f_t: diff1_o4(&f, h),
            f_tt: diff2_o4(&f, h),
            nu_t: diff1_o4(&nu, h),
            nu_tt: diff2_o4(&nu, h),
            f,
            nu,
        })
    }
}

impl FrameCurveSource for TabulatedFrameCurve {
    fn sample(&self, t: f64) -> FrameCurveSample {
        let h = self.axis.step;
        let u = ((t - self.axis.start) / h).clamp(0.0, (self.axis.len - 1) as f64);
        let k = (u.floor() as usize).min(self.axis.len - 2);
        let s = u - k as f64;
        FrameCurveSample {
            f: hermite(self.f[k], self.f_t[k], self.f[k + 1], self.f_t[k + 1], s, h),
            f_t: hermite(self.f_t[k], self.f_tt[k], self.f_t[k + 1], self.f_tt[k + 1], s, h),
            nu: hermite(self.nu[k], self.nu_t[k], self.nu[k + 1], self.nu_t[k + 1], s, h),
            nu_t: hermite(self.nu_t[k], self.nu_tt[k], self.nu_t[k + 1], self.nu_tt[k + 1], s, h),
        }
    }

    fn domain(&self) -> (f64, f64) {
        (self.axis.start, self.axis.end())
    }
}

/// Largest violations of the curve-data invariants on a sample grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCurveDiagnostics {
    pub max_det_defect: f64,
    pub max_membership_defect: f64,
    /// max |<f^{-1} f_t, nu>|
    pub max_orthogonality_defect: f64,
    /// min <f^{-1} f_t, f^{-1} f_t>
    pub min_speed_sq: f64,
    /// Share of samples where <nu'+(rho+1)w, nu'-(rho-1)w> is nonzero.
    pub nondegenerate_fraction: f64,
}

pub fn frame_curve_diagnostics(src: &dyn FrameCurveSource, axis: &Axis, rho: f64) -> FrameCurveDiagnostics {
    let mut d = FrameCurveDiagnostics {
        max_det_defect: 0.0,
        max_membership_defect: 0.0,
        max_orthogonality_defect: 0.0,
        min_speed_sq: f64::INFINITY,
        nondegenerate_fraction: 0.0,
    };
    let mut good = 0usize;
    for t in axis.coords() {
        let s = src.sample(t);
        let tan = s.tangent();
        d.max_det_defect = d.max_det_defect.max((s.f.det() - 1.0).abs());
        d.max_membership_defect = d.max_membership_defect.max((sl_inner(&s.nu, &s.nu) + 1.0).abs());
        d.max_orthogonality_defect = d.max_orthogonality_defect.max(sl_inner(&tan, &s.nu).abs());
        d.min_speed_sq = d.min_speed_sq.min(sl_inner(&tan, &tan));
        let q = nondegeneracy(&s, rho);
        let scale = (s.nu_t.norm() + (rho + 1.0).abs() * s.w().norm()).powi(2).max(1e-300);
        if q.abs() > 1e-10 * scale.max(1.0) {
            good += 1;
        }
    }
    d.nondegenerate_fraction = good as f64 / axis.len.max(1) as f64;
    d
}

/// <nu' + (rho+1) w, nu' - (rho-1) w>
pub fn nondegeneracy(s: &FrameCurveSample, rho: f64) -> f64 {
    let w = s.w();
    sl_inner(&(s.nu_t + w * (rho + 1.0)), &(s.nu_t - w * (rho - 1.0)))
}

/// Validated curve data (f~, nu~, rho).
#[derive(Clone)]
pub struct GeometricCauchyData {
    pub axis: Axis,
    pub rho: f64,
    pub provenance: Provenance,
    source: Arc<dyn FrameCurveSource>,
}

impl std::fmt::Debug for GeometricCauchyData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeometricCauchyData")
            .field("axis", &self.axis)
            .field("rho", &self.rho)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

pub fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() || (rho - 1.0).abs() < 1e-6 {
        return Err(Error::InvalidParameter(format!("rho = {rho} must be positive and different from 1")));
    }
    Ok(())
}

impl GeometricCauchyData {
    pub fn new(source: Arc<dyn FrameCurveSource>, axis: Axis, rho: f64, provenance: Provenance) -> Result<Self> {
        Self::validated(source, axis, rho, provenance, MEMBERSHIP_TOL)
    }

    fn validated(
        source: Arc<dyn FrameCurveSource>,
        axis: Axis,
        rho: f64,
        provenance: Provenance,
        orth_tol: f64,
    ) -> Result<Self> {
        check_rho(rho)?;
        let (lo, hi) = source.domain();
        if axis.start < lo - 1e-12 || axis.end() > hi + 1e-12 {
            return Err(Error::InvalidParameter(format!("sample range leaves the data domain [{lo}, {hi}]")));
        }
        let d = frame_curve_diagnostics(source.as_ref(), &axis, rho);
        if !(d.max_det_defect <= MEMBERSHIP_TOL && d.max_membership_defect <= MEMBERSHIP_TOL) {
            return Err(Error::PreconditionViolated(format!(
                "curve leaves AdS3 or nu leaves H^2 (defects {:e}, {:e})",
                d.max_det_defect, d.max_membership_defect
            )));
        }
        if d.max_orthogonality_defect > orth_tol {
            return Err(Error::PreconditionViolated(format!(
                "<f^-1 f_t, nu> = {:e} does not vanish",
                d.max_orthogonality_defect
            )));
        }
        if !(d.min_speed_sq > 0.0) {
            return Err(Error::PreconditionViolated(format!("curve is not spacelike (min speed^2 {:e})", d.min_speed_sq)));
        }
        if d.nondegenerate_fraction < NONDEGENERATE_FRACTION {
            return Err(Error::DegenerateData(format!(
                "nondegeneracy quantity vanishes on {:.1}% of samples",
                100.0 * (1.0 - d.nondegenerate_fraction)
            )));
        }
        Ok(GeometricCauchyData { axis, rho, provenance, source })
    }

    /// Curve data from samples; derivatives by 4th-order differences, so
    /// orthogonality is only checked to [`TABULATED_ORTH_TOL`].
    pub fn tabulated(axis: Axis, f: Vec<Mat2>, nu: Vec<SlVec>, rho: f64) -> Result<Self> {
        let src = TabulatedFrameCurve::new(axis, f, nu)?;
        Self::validated(Arc::new(src), axis, rho, Provenance::Tabulated, TABULATED_ORTH_TOL)
    }

    pub fn source(&self) -> Arc<dyn FrameCurveSource> {
        self.source.clone()
    }

    pub fn sample(&self, t: f64) -> FrameCurveSample {
        self.source.sample(t)
    }

    /// Case 1 parameter with the same coefficients.
    pub fn case1_r(&self) -> f64 {
        0.5 * (self.rho - 1.0)
    }
}

/// Closed-form curve of the worked example with parameter r.
pub fn example_6_2_curve(r: f64) -> impl Fn(f64) -> FrameCurveSample + Send + Sync {
    move |t: f64| {
        let q = 4.0 * r * (r + 1.0);
        let f = Mat2::new(1.0 - t * t / q, t / (2.0 * r), -t / (2.0 * (r + 1.0)), 1.0);
        let f_t = Mat2::new(-2.0 * t / q, 1.0 / (2.0 * r), -1.0 / (2.0 * (r + 1.0)), 0.0);
        let d = 1.0 - t * t;
        let nu = SlVec::new(1.0 + t * t, 0.0, 2.0 * t) * (1.0 / d);
        let nu_t = SlVec::new(2.0 * t, 0.0, 1.0 + t * t) * (2.0 / (d * d));
        FrameCurveSample { f, f_t, nu, nu_t }
    }
}

/// Parameters of the synthetic data set.
pub const DEMO_KAPPA: f64 = 0.8;
pub const DEMO_SIGMA: f64 = 0.5;
pub const DEMO_TAU: f64 = 0.4;
pub const DEMO_RHO: f64 = 5.0;

/// f~ = exp(t(tau e2 + (sigma + kappa/2) e3)) exp(-kappa t e3 / 2),
/// nu~ = cosh(kappa t) e1 + sinh(kappa t) e2. Then
/// f~^{-1} f~_t = tau (sinh(kappa t) e1 + cosh(kappa t) e2) + sigma e3 is
/// orthogonal to nu~.
pub fn twisted_curve(kappa: f64, sigma: f64, tau: f64) -> impl Fn(f64) -> FrameCurveSample + Send + Sync {
    use crate::algebra::{exp_sl, V1, V2, V3};
    move |t: f64| {
        let gen = V2 * tau + V3 * (sigma + 0.5 * kappa);
        let f = exp_sl(&(gen * t)) * exp_sl(&(V3 * (-0.5 * kappa * t)));
        let (c, s) = ((kappa * t).cosh(), (kappa * t).sinh());
        let tangent = V1 * (tau * s) + V2 * (tau * c) + V3 * sigma;
        FrameCurveSample { f, f_t: f * tangent.to_mat(), nu: V1 * c + V2 * s, nu_t: (V1 * s + V2 * c) * kappa }
    }
}

pub fn demo_curve(t: f64) -> FrameCurveSample {
    twisted_curve(DEMO_KAPPA, DEMO_SIGMA, DEMO_TAU)(t)
}

/// Frame-curve source of a named data set; rho of the example follows
/// rho = |2r + 1|.
pub fn preset_source(name: &str, r: Option<f64>) -> Result<(Arc<dyn FrameCurveSource>, f64)> {
    match name {
        EXAMPLE_6_2 => {
            let r = r.unwrap_or(2.0);
            if r.abs() < 1e-12 || (r + 1.0).abs() < 1e-12 {
                return Err(Error::InvalidParameter(format!("r = {r} is excluded")));
            }
            Ok((Arc::new(FnFrameCurve { f: example_6_2_curve(r), domain: (-0.95, 0.95) }), (2.0 * r + 1.0).abs()))
        }
        GCP_DEMO => Ok((Arc::new(FnFrameCurve { f: demo_curve, domain: (-2.0, 2.0) }), DEMO_RHO)),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

/// Validated named data set on its whole domain (sampled every 0.01).
pub fn preset(name: &str, r: Option<f64>) -> Result<GeometricCauchyData> {
    let (src, rho) = preset_source(name, r)?;
    let (lo, hi) = src.domain();
    let axis = Axis::from_range(lo, hi, 0.01)?;
    GeometricCauchyData::new(src, axis, rho, Provenance::Preset(name.to_string()))
}

/// Harmonic Cauchy data generated by curve data.
pub struct TranslatedCurve {
    frame: Arc<dyn FrameCurveSource>,
    rho: f64,
}

impl TranslatedCurve {
    fn n1(&self, t: f64) -> SlVec {
        let s = self.frame.sample(t);
        let rho = self.rho;
        (s.nu_t + s.w() * (rho + 1.0)) * ((rho - 1.0) / (2.0 * rho))
    }
}

impl CurveSource for TranslatedCurve {
    fn sample(&self, t: f64) -> CurveSample {
        let s = self.frame.sample(t);
        let (lo, hi) = self.frame.domain();
        let d = N1_DERIV_STEP;
        // centre the 5-point stencil inside the domain
        let c = t.clamp(lo + 2.0 * d, hi - 2.0 * d);
        let p = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|k| self.n1(c + k * d));
        let off = (t - c) / d;
        // derivative of the quartic through the stencil, evaluated at offset `off`
        let weights = quartic_derivative_weights(off);
        let mut n1_t = SlVec::default();
        for k in 0..5 {
            n1_t = n1_t + p[k] * (weights[k] / d);
        }
        CurveSample { n0: s.nu, n0_t: s.nu_t, n1: self.n1(t), n1_t }
    }

    fn domain(&self) -> (f64, f64) {
        self.frame.domain()
    }
}

/// Weights of the derivative at `u` of the Lagrange interpolant through
/// nodes -2..=2.
fn quartic_derivative_weights(u: f64) -> [f64; 5] {
    let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut w = [0.0; 5];
    for k in 0..5 {
        let denom: f64 = (0..5).filter(|&m| m != k).map(|m| nodes[k] - nodes[m]).product();
        let mut s = 0.0;
        for l in 0..5 {
            if l == k {
                continue;
            }
            let mut p = 1.0;
            for m in 0..5 {
                if m != k && m != l {
                    p *= u - nodes[m];
                }
            }
            s += p;
        }
        w[k] = s / denom;
    }
    w
}

pub type WField = Arc<dyn Fn(f64) -> SlVec + Send + Sync>;

/// Harmonic Cauchy source for the data together with w(t).
pub fn translated_source(gcd: &GeometricCauchyData) -> Result<(Arc<dyn CurveSource>, WField)> {
    check_rho(gcd.rho)?;
    let frame = gcd.source();
    let wsrc = frame.clone();
    let w: WField = Arc::new(move |t| wsrc.sample(t).w());
    Ok((Arc::new(TranslatedCurve { frame, rho: gcd.rho }), w))
}

/// Cauchy data on `axis` and the samples of w.
pub fn gcp_translate(gcd: &GeometricCauchyData, axis: Axis) -> Result<(CauchyData1D, Vec<SlVec>)> {
    let (src, w) = translated_source(gcd)?;
    let cd = CauchyData1D::from_source(src, axis, gcd.provenance.clone())?;
    let ws = axis.coords().iter().map(|t| w(*t)).collect();
    Ok((cd, ws))
}

#[derive(Debug, Clone)]
pub struct GcpSolution {
    pub harmonic: HarmonicSolution,
    pub surface: SurfaceField,
    pub cauchy: CauchyData1D,
    /// Diagonal base node (i, j) where f = f~.
    pub base: (usize, usize),
    pub r: f64,
}

/// Diagonal node nearest t = 0 on a grid whose axes share a lattice.
pub fn diagonal_base(grid: &Grid2) -> Result<(usize, usize)> {
    let lo = grid.x.start.max(grid.y.start);
    let hi = grid.x.end().min(grid.y.end());
    if lo > hi + 1e-12 {
        return Err(Error::InvalidParameter("grid does not meet the diagonal".into()));
    }
    let (_, _, _) = diagonal_axis(grid)?;
    let t = 0.0f64.clamp(lo, hi);
    let i = grid.x.nearest(t);
    let j = grid.y.nearest(grid.x.coord(i));
    Ok((i, j))
}

pub fn gcp_solve(gcd: &GeometricCauchyData, grid: &Grid2) -> Result<GcpSolution> {
    let (axis, _, _) = diagonal_axis(grid)?;
    let (cd, _) = gcp_translate(gcd, axis)?;
    let harmonic = dalembert_solve(&cd, grid)?;
    let base = diagonal_base(grid)?;
    let t0 = grid.x.coord(base.0);
    let r = gcd.case1_r();
    let surface = reconstruct_case1(&harmonic.nu, r, gcd.sample(t0).f, base)?;
    Ok(GcpSolution { harmonic, surface, cauchy: cd, base, r })
}

/// Checks of a solved problem along the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalReport {
    /// max ||f(t,t) - f~(t)||
    pub curve: f64,
    /// max ||nu(t,t) - nu~(t)||
    pub gauss_map: f64,
    /// max ||w - nu_t(t,t)/(rho^2 - 1)|| with nu_t the derivative along the diagonal.
    pub printed_w_identity: f64,
    /// max ||w - (rho nu_s + nu_t)/(rho^2 - 1)|| with nu_s = nu_x - nu_y.
    pub w_identity: f64,
}

pub fn diagonal_report(gcd: &GeometricCauchyData, sol: &GcpSolution) -> DiagonalReport {
    let g = sol.surface.grid;
    // differences of the solved field, not the solver's own derivative caches
    let nx = sol.harmonic.nu.fd_deriv_x();
    let ny = sol.harmonic.nu.fd_deriv_y();
    let rho = gcd.rho;
    let mut rep = DiagonalReport { curve: 0.0, gauss_map: 0.0, printed_w_identity: 0.0, w_identity: 0.0 };
    for i in 0..g.nx() {
        let x = g.x.coord(i);
        let j = g.y.nearest(x);
        if (g.y.coord(j) - x).abs() > 1e-9 * g.x.step {
            continue;
        }
        let k = g.index(i, j);
        let s = gcd.sample(x);
        rep.curve = rep.curve.max((sol.surface.f[k] - s.f).norm());
        rep.gauss_map = rep.gauss_map.max((sol.harmonic.nu.values[k] - s.nu).norm());
        let w = s.w();
        let nu_t = nx[k] + ny[k];
        let nu_s = nx[k] - ny[k];
        rep.printed_w_identity = rep.printed_w_identity.max((w - nu_t * (1.0 / (rho * rho - 1.0))).norm());
        rep.w_identity = rep.w_identity.max((w - (nu_s * rho + nu_t) * (1.0 / (rho * rho - 1.0))).norm());
    }
    rep
}

/// Printed closed-form surface of the worked example.
pub fn example_6_2_printed_surface(r: f64, x: f64, y: f64) -> Mat2 {
    Mat2::new(1.0 - x * y / (4.0 * r * (r + 1.0)), x / (2.0 * r), -y / (2.0 * (r + 1.0)), 1.0)
}

/// max over the sample grid of |<f^{-1} df, nu>| for the printed surface
/// paired with the printed (non-normalised) Gauss map.
pub fn example_6_2_printed_orthogonality(r: f64, grid: &Grid2) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let (x, y) = grid.point(i, j);
            let f = example_6_2_printed_surface(r, x, y);
            let fx = Mat2::new(-y / (4.0 * r * (r + 1.0)), 1.0 / (2.0 * r), 0.0, 0.0);
            let fy = Mat2::new(-x / (4.0 * r * (r + 1.0)), 0.0, -1.0 / (2.0 * (r + 1.0)), 0.0);
            let nu = crate::presets::printed::nu_4_2(x, y).to_mat();
            let fi = f.adj();
            m = m.max(gl_inner(&(fi * fx), &nu).abs()).max(gl_inner(&(fi * fy), &nu).abs());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_tangent_has_diagonal_entries() {
        let s = example_6_2_curve(2.0)(0.5);
        let t = s.f.adj() * s.f_t;
        assert!((t.a11 + 0.5 / 24.0).abs() < 1e-14);
        assert!(matches!(preset(EXAMPLE_6_2, None), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn demo_data_are_admissible() {
        let g = preset(GCP_DEMO, None).unwrap();
        let s = g.sample(0.7);
        let h = 1e-5;
        let fd = (g.sample(0.7 + h).f - g.sample(0.7 - h).f) * (0.5 / h);
        assert!((fd - s.f_t).norm() < 1e-8);
        let (src, _) = translated_source(&g).unwrap();
        let c = src.sample(0.3);
        assert!(sl_inner(&c.n0, &c.n1).abs() < 1e-12);
        let fd1 = (src.sample(0.3 + h).n1 - src.sample(0.3 - h).n1) * (0.5 / h);
        assert!((fd1 - c.n1_t).norm() < 1e-7);
        // near the end the stencil is shifted but stays accurate
        let e = src.sample(1.9995);
        let fd2 = (src.sample(1.9995 + 1e-4).n1 - src.sample(1.9995 - 1e-4).n1) * (0.5 / 1e-4);
        assert!((fd2 - e.n1_t).norm() < 1e-6);
    }

    #[test]
    fn n1_formula_inverts_the_case1_relation() {
        // along the diagonal f^{-1} f_t = [nu, N1]/(2(rho-1)) - [nu, nu' - N1]/(2(rho+1))
        let g = preset(GCP_DEMO, None).unwrap();
        let (src, _) = translated_source(&g).unwrap();
        let rho = g.rho;
        for t in [-1.0, 0.0, 0.4] {
            let c = src.sample(t);
            let rebuilt = bracket(&c.n0, &c.n1) * (0.5 / (rho - 1.0)) - bracket(&c.n0, &(c.n0_t - c.n1)) * (0.5 / (rho + 1.0));
            assert!((rebuilt - g.sample(t).tangent()).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_rho_and_degenerate_data() {
        assert!(check_rho(1.0 + 1e-8).is_err());
        assert!(check_rho(-2.0).is_err());
        let axis = Axis::from_range(-1.0, 1.0, 0.1).unwrap();
        // a constant normal never degenerates: the quantity is -(rho^2 - 1)|w|^2
        let still = FnFrameCurve { f: twisted_curve(0.0, 0.5, 0.0), domain: (-1.0, 1.0) };
        assert!(GeometricCauchyData::new(Arc::new(still), axis, 3.0, Provenance::Tabulated).is_ok());
        // nu' = (rho - 1) w makes it vanish identically
        let locked = FnFrameCurve { f: twisted_curve(1.0, 0.5, 0.0), domain: (-1.0, 1.0) };
        assert!(matches!(
            GeometricCauchyData::new(Arc::new(locked), axis, 3.0, Provenance::Tabulated),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn quartic_weights_reduce_to_central_stencil() {
        let w = quartic_derivative_weights(0.0);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for k in 0..5 {
            assert!((w[k] - expect[k]).abs() < 1e-14);
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn translated_data_are_orthogonal(
            kappa in -1.5..1.5f64,
            sigma in 0.2..1.0f64,
            tau in -0.8..0.8f64,
            rho in prop_oneof![0.2..0.8f64, 1.5..8.0f64],
        ) {
            let src = FnFrameCurve { f: twisted_curve(kappa, sigma, tau), domain: (-1.0, 1.0) };
            let axis = Axis::from_range(-1.0, 1.0, 0.05).unwrap();
            let gcd = GeometricCauchyData::new(Arc::new(src), axis, rho, Provenance::Tabulated);
            prop_assume!(gcd.is_ok());
            let gcd = gcd.unwrap();
            let (cd, _) = gcp_translate(&gcd, Axis::from_range(-0.9, 0.9, 0.05).unwrap()).unwrap();
            for s in &cd.samples {
                prop_assert!(sl_inner(&s.n0, &s.n1).abs() <= 1e-10 * (1.0 + s.n1.norm()));
            }
        }
    }
}
