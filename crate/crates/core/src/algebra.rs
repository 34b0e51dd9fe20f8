//! Matrix models: gl(2,R) as R^{2,2}, sl(2,R) as R^{2,1}, the hyperbolic
//! plane H^2 inside sl(2,R) and AdS3 = SL(2,R).
//!
//! Basis: e0 = I, e1 = [[0,-1],[1,0]], e2 = [[0,1],[1,0]], e3 = [[-1,0],[0,1]].
//! The metric on gl is <X,Y> = -1/2 tr(X adj Y), so <X,X> = -det X; on sl it
//! restricts to 1/2 tr(XY) = -x1y1 + x2y2 + x3y3.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Default tolerance for membership and invariant checks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Below this |det X| the exponential uses its series branch.
pub const EXP_BRANCH_CUT: f64 = 1e-12;
/// Determinants below this are treated as singular.
pub const SINGULAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub const fn zero() -> Self {
        Mat2::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn scalar(s: f64) -> Self {
        Mat2::new(s, 0.0, 0.0, s)
    }

    /// Matrix with coordinates (x0, x1, x2, x3) in the basis (e0, e1, e2, e3).
    pub fn from_basis(x: [f64; 4]) -> Self {
        let [x0, x1, x2, x3] = x;
        Mat2::new(x0 - x3, x2 - x1, x1 + x2, x0 + x3)
    }

    /// Coordinates (x0, x1, x2, x3) in the basis (e0, e1, e2, e3).
    pub fn to_basis(&self) -> [f64; 4] {
        [
            0.5 * (self.a11 + self.a22),
            0.5 * (self.a21 - self.a12),
            0.5 * (self.a21 + self.a12),
            0.5 * (self.a22 - self.a11),
        ]
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    /// Adjugate; equals the inverse for det = 1.
    pub fn adj(&self) -> Self {
        Mat2::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.abs() < SINGULAR_TOL {
            return Err(Error::SingularMatrix(d));
        }
        Ok(self.adj() * (1.0 / d))
    }

    /// Traceless part as an sl(2,R) vector.
    pub fn sl_part(&self) -> SlVec {
        let [_, x1, x2, x3] = self.to_basis();
        SlVec::new(x1, x2, x3)
    }

    /// Rescale to unit determinant (requires det > 0).
    pub fn unimodular(&self) -> Self {
        *self * (1.0 / self.det().sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.a11.abs().max(self.a12.abs()).max(self.a21.abs()).max(self.a22.abs())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22).sqrt()
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_entries(e: [f64; 4]) -> Self {
        Mat2::new(e[0], e[1], e[2], e[3])
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Mat2) {
        *self = *self + o;
    }
}

impl SubAssign for Mat2 {
    fn sub_assign(&mut self, o: Mat2) {
        *self = *self - o;
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self * -1.0
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m * self
    }
}

/// Element of sl(2,R) in coordinates of (e1, e2, e3).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlVec {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl SlVec {
    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        SlVec { v1, v2, v3 }
    }

    pub const fn zero() -> Self {
        SlVec::new(0.0, 0.0, 0.0)
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(-self.v3, self.v2 - self.v1, self.v1 + self.v2, self.v3)
    }

    /// Coordinates of a traceless matrix (the trace part is discarded).
    pub fn from_mat(m: &Mat2) -> Self {
        m.sl_part()
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        (self.v1 * self.v1 + self.v2 * self.v2 + self.v3 * self.v3).sqrt()
    }

    pub fn dot_euclid(&self, o: &SlVec) -> f64 {
        self.v1 * o.v1 + self.v2 * o.v2 + self.v3 * o.v3
    }

    pub fn is_finite(&self) -> bool {
        self.v1.is_finite() && self.v2.is_finite() && self.v3.is_finite()
    }
}

impl Add for SlVec {
    type Output = SlVec;
    fn add(self, o: SlVec) -> SlVec {
        SlVec::new(self.v1 + o.v1, self.v2 + o.v2, self.v3 + o.v3)
    }
}

impl Sub for SlVec {
    type Output = SlVec;
    fn sub(self, o: SlVec) -> SlVec {
        SlVec::new(self.v1 - o.v1, self.v2 - o.v2, self.v3 - o.v3)
    }
}

impl AddAssign for SlVec {
    fn add_assign(&mut self, o: SlVec) {
        *self = *self + o;
    }
}

impl SubAssign for SlVec {
    fn sub_assign(&mut self, o: SlVec) {
        *self = *self - o;
    }
}

impl Neg for SlVec {
    type Output = SlVec;
    fn neg(self) -> SlVec {
        SlVec::new(-self.v1, -self.v2, -self.v3)
    }
}

impl Mul<f64> for SlVec {
    type Output = SlVec;
    fn mul(self, s: f64) -> SlVec {
        SlVec::new(self.v1 * s, self.v2 * s, self.v3 * s)
    }
}

impl Mul<SlVec> for f64 {
    type Output = SlVec;
    fn mul(self, v: SlVec) -> SlVec {
        v * self
    }
}

pub const E0: Mat2 = Mat2::identity();
pub const E1: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);
pub const E2: Mat2 = Mat2::new(0.0, 1.0, 1.0, 0.0);
pub const E3: Mat2 = Mat2::new(-1.0, 0.0, 0.0, 1.0);

pub const V1: SlVec = SlVec::new(1.0, 0.0, 0.0);
pub const V2: SlVec = SlVec::new(0.0, 1.0, 0.0);
pub const V3: SlVec = SlVec::new(0.0, 0.0, 1.0);

/// Nilpotent [[0,1],[0,0]] = (e2 - e1)/2.
pub const E_PLUS: Mat2 = Mat2::new(0.0, 1.0, 0.0, 0.0);
/// Nilpotent [[0,0],[1,0]] = (e1 + e2)/2.
pub const E_MINUS: Mat2 = Mat2::new(0.0, 0.0, 1.0, 0.0);

/// -1/2 tr(X adj Y).
pub fn gl_inner(x: &Mat2, y: &Mat2) -> f64 {
    -0.5 * (*x * y.adj()).trace()
}

/// 1/2 tr(XY) on sl(2,R).
pub fn sl_inner(x: &SlVec, y: &SlVec) -> f64 {
    -x.v1 * y.v1 + x.v2 * y.v2 + x.v3 * y.v3
}

/// Commutator XY - YX in coordinates.
pub fn bracket(x: &SlVec, y: &SlVec) -> SlVec {
    SlVec::new(
        -2.0 * (x.v2 * y.v3 - x.v3 * y.v2),
        2.0 * (x.v3 * y.v1 - x.v1 * y.v3),
        2.0 * (x.v1 * y.v2 - x.v2 * y.v1),
    )
}

/// g X g^{-1}.
pub fn ad_action(g: &Mat2, x: &SlVec) -> Result<SlVec> {
    let d = g.det();
    if d.abs() < SINGULAR_TOL {
        return Err(Error::SingularMatrix(d));
    }
    Ok(ad_unimodular(g, x) * (1.0 / d))
}

/// g X adj(g), which is g X g^{-1} when det g = 1.
pub fn ad_unimodular(g: &Mat2, x: &SlVec) -> SlVec {
    (*g * x.to_mat() * g.adj()).sl_part()
}

/// Closed-form exponential of an sl(2,R) element, using X^2 = -det(X) I.
pub fn exp_sl(x: &SlVec) -> Mat2 {
    let m = x.to_mat();
    let d = m.det();
    let (c, s) = if d.abs() < EXP_BRANCH_CUT {
        (1.0 - d / 2.0 + d * d / 24.0, 1.0 - d / 6.0 + d * d / 120.0)
    } else if d > 0.0 {
        let w = d.sqrt();
        (w.cos(), w.sin() / w)
    } else {
        let w = (-d).sqrt();
        (w.cosh(), w.sinh() / w)
    };
    Mat2::scalar(c) + m * s
}

/// Residuals of the four bracket/metric identities for X, Y and a Z
/// orthogonal to both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketResiduals {
    /// |<X,[X,Y]>|
    pub orthogonality: f64,
    /// |<[X,Y],[X,Y]> - 4(<X,Y>^2 - <X,X><Y,Y>)|
    pub lagrange: f64,
    /// ||[[Z,X],[Z,Y]] + 4<Z,Z>[X,Y]||
    pub double_bracket: f64,
    /// |<[Z,X],[Z,Y]> + 4<Z,Z><X,Y>|
    pub transported_metric: f64,
}

impl BracketResiduals {
    pub fn max(&self) -> f64 {
        self.orthogonality
            .max(self.lagrange)
            .max(self.double_bracket)
            .max(self.transported_metric)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.orthogonality, self.lagrange, self.double_bracket, self.transported_metric]
    }
}

pub fn bracket_identities_check(x: &SlVec, y: &SlVec, z: &SlVec) -> Result<BracketResiduals> {
    bracket_identities_check_tol(x, y, z, MEMBERSHIP_TOL)
}

pub fn bracket_identities_check_tol(
    x: &SlVec,
    y: &SlVec,
    z: &SlVec,
    tol: f64,
) -> Result<BracketResiduals> {
    let zx = sl_inner(z, x);
    let zy = sl_inner(z, y);
    if zx.abs() > tol || zy.abs() > tol {
        return Err(Error::PreconditionViolated(format!(
            "Z is not orthogonal to X and Y (<Z,X> = {zx:e}, <Z,Y> = {zy:e})"
        )));
    }
    let xy = bracket(x, y);
    let zxb = bracket(z, x);
    let zyb = bracket(z, y);
    let zz = sl_inner(z, z);
    let ip_xy = sl_inner(x, y);
    Ok(BracketResiduals {
        orthogonality: sl_inner(x, &xy).abs(),
        lagrange: (sl_inner(&xy, &xy) - 4.0 * (ip_xy * ip_xy - sl_inner(x, x) * sl_inner(y, y))).abs(),
        double_bracket: (bracket(&zxb, &zyb) + xy * (4.0 * zz)).norm(),
        transported_metric: (sl_inner(&zxb, &zyb) + 4.0 * zz * ip_xy).abs(),
    })
}

/// Remove from `z` its components along span{x, y} with respect to sl_inner.
pub fn orthogonal_projection(z: &SlVec, x: &SlVec, y: &SlVec) -> Result<SlVec> {
    let g11 = sl_inner(x, x);
    let g12 = sl_inner(x, y);
    let g22 = sl_inner(y, y);
    let det = g11 * g22 - g12 * g12;
    if det.abs() < SINGULAR_TOL {
        return Err(Error::SingularMatrix(det));
    }
    let r1 = sl_inner(z, x);
    let r2 = sl_inner(z, y);
    let c1 = (g22 * r1 - g12 * r2) / det;
    let c2 = (g11 * r2 - g12 * r1) / det;
    Ok(*z - *x * c1 - *y * c2)
}

/// Point of the hyperbolic plane: <v,v> = -1 on the sheet with v1 > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2Point {
    v: SlVec,
}

impl H2Point {
    pub fn new(v: SlVec) -> Result<Self> {
        Self::with_tol(v, MEMBERSHIP_TOL)
    }

    pub fn with_tol(v: SlVec, tol: f64) -> Result<Self> {
        let q = sl_inner(&v, &v) + 1.0;
        if q.abs() > tol || v.v1 <= 0.0 || !v.is_finite() {
            return Err(Error::PreconditionViolated(format!(
                "not on the upper sheet of H^2: <v,v>+1 = {q:e}, v1 = {}",
                v.v1
            )));
        }
        Ok(H2Point { v })
    }

    /// Radially rescale a timelike vector with v1 > 0 onto H^2.
    pub fn normalize(v: SlVec) -> Result<Self> {
        let q = sl_inner(&v, &v);
        if !(q < 0.0) || v.v1 <= 0.0 {
            return Err(Error::PreconditionViolated(format!(
                "cannot normalise onto H^2: <v,v> = {q:e}, v1 = {}",
                v.v1
            )));
        }
        Ok(H2Point { v: v * (1.0 / (-q).sqrt()) })
    }

    pub fn vec(&self) -> SlVec {
        self.v
    }
}

/// Point of AdS3 = SL(2,R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdsPoint {
    m: Mat2,
}

impl AdsPoint {
    pub fn new(m: Mat2) -> Result<Self> {
        Self::with_tol(m, MEMBERSHIP_TOL)
    }

    pub fn with_tol(m: Mat2, tol: f64) -> Result<Self> {
        let d = m.det() - 1.0;
        if d.abs() > tol || !m.is_finite() {
            return Err(Error::PreconditionViolated(format!("det - 1 = {d:e}")));
        }
        Ok(AdsPoint { m })
    }

    pub fn mat(&self) -> Mat2 {
        self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_exp(x: &SlVec, terms: usize) -> Mat2 {
        let m = x.to_mat();
        let mut acc = Mat2::identity();
        let mut term = Mat2::identity();
        for k in 1..terms {
            term = term * m * (1.0 / k as f64);
            acc += term;
        }
        acc
    }

    #[test]
    fn gl_inner_values() {
        assert_eq!(gl_inner(&E0, &E0), -1.0);
        assert_eq!(gl_inner(&E2, &E2), 1.0);
        let m = Mat2::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(gl_inner(&m, &m), 2.0);
        // adjugate-trace oracle written out by hand
        let tr = m.a11 * m.a22 - m.a12 * m.a21 + m.a21 * (-m.a12) + m.a22 * m.a11;
        assert_eq!(-0.5 * tr, 2.0);
    }

    #[test]
    fn sl_inner_values() {
        assert_eq!(sl_inner(&V1, &V1), -1.0);
        assert_eq!(sl_inner(&V3, &V3), 1.0);
        let v = V1 + V2 * 2.0;
        assert_eq!(sl_inner(&v, &v), 3.0);
        assert_eq!(-v.to_mat().det(), 3.0);
    }

    #[test]
    fn basis_matches_coordinates() {
        assert_eq!(V1.to_mat(), E1);
        assert_eq!(V2.to_mat(), E2);
        assert_eq!(V3.to_mat(), E3);
        assert_eq!(Mat2::from_basis([1.0, 0.0, 0.0, 0.0]), E0);
        let m = Mat2::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(m.to_basis(), [2.5, 0.5, 2.5, 1.5]);
        assert_eq!(Mat2::from_basis(m.to_basis()), m);
    }

    #[test]
    fn bracket_table() {
        assert_eq!(bracket(&V1, &V2), V3 * 2.0);
        assert_eq!(bracket(&V2, &V3), V1 * -2.0);
        assert_eq!(bracket(&V3, &V1), V2 * 2.0);
        let x = SlVec::new(0.3, -1.2, 2.0);
        assert_eq!(bracket(&x, &x), SlVec::zero());
        let y = SlVec::new(-0.7, 0.4, 1.1);
        let direct = (x.to_mat() * y.to_mat() - y.to_mat() * x.to_mat()).sl_part();
        assert!((bracket(&x, &y) - direct).norm() < 1e-15);
    }

    #[test]
    fn nilpotents() {
        assert_eq!(E_PLUS * E_PLUS, Mat2::zero());
        assert_eq!(E_MINUS * E_MINUS, Mat2::zero());
        assert_eq!((V2 - V1).to_mat() * 0.5, E_PLUS);
        assert_eq!((V1 + V2).to_mat() * 0.5, E_MINUS);
        let a = 0.37;
        let e = exp_sl(&(SlVec::from_mat(&E_PLUS) * a));
        assert!((e - (Mat2::identity() + E_PLUS * a)).max_abs() < 1e-15);
    }

    #[test]
    fn ad_action_examples() {
        let x = SlVec::new(0.2, 0.5, -0.3);
        assert!((ad_action(&Mat2::identity(), &x).unwrap() - x).norm() < 1e-16);
        let s: f64 = 0.8;
        let g = exp_sl(&(V3 * (s / 2.0)));
        let got = ad_action(&g, &V1).unwrap();
        let explicit = (g * E1 * g.inverse().unwrap()).sl_part();
        let want = SlVec::new(s.cosh(), s.sinh(), 0.0);
        assert!((got - want).norm() < 1e-14);
        assert!((explicit - want).norm() < 1e-14);
        let u = Mat2::new(1.0, 1.0, 0.0, 1.0);
        let got = ad_action(&u, &V1).unwrap();
        assert_eq!(got.to_mat(), Mat2::new(1.0, -2.0, 1.0, -1.0));
        assert_eq!(got, SlVec::new(1.5, -0.5, -1.0));
        assert_eq!(sl_inner(&got, &got), -1.0);
        assert!(matches!(ad_action(&Mat2::zero(), &x), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_sl(&SlVec::zero()), Mat2::identity());
        let e = exp_sl(&(V1 * std::f64::consts::FRAC_PI_2));
        assert!((e - E1).max_abs() < 1e-15);
        let s = series_exp(&(V1 * std::f64::consts::FRAC_PI_2), 30);
        assert!((s - E1).max_abs() < 1e-13);
    }

    #[test]
    fn exp_branches_match_series() {
        let samples = [
            SlVec::new(1.3, 0.2, -0.4),
            SlVec::new(0.1, 1.1, 0.9),
            SlVec::new(0.5, 0.5, 0.0),
            SlVec::new(1e-7, 0.0, 0.0),
            SlVec::new(0.0, 1e-7, 0.0),
            SlVec::new(0.7, 0.7 + 1e-13, 0.0),
        ];
        for x in samples {
            let a = exp_sl(&x);
            let b = series_exp(&x, 40);
            assert!((a - b).max_abs() < 1e-12, "{x:?}");
            assert!((a.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identities_on_basis() {
        let r = bracket_identities_check(&V2, &V3, &V1).unwrap();
        assert_eq!(r.max(), 0.0);
        let x = SlVec::new(0.4, 0.1, 0.9);
        let z = orthogonal_projection(&SlVec::new(1.0, 0.3, -0.2), &x, &SlVec::new(0.0, 1.0, 0.0)).unwrap();
        let r = bracket_identities_check(&x, &x, &z).unwrap();
        assert!(r.max() < 1e-14);
        assert!(matches!(
            bracket_identities_check(&V1, &V2, &V1),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn h2_and_ads_membership() {
        assert!(H2Point::new(V1).is_ok());
        assert!(H2Point::new(-V1).is_err());
        assert!(H2Point::new(V2).is_err());
        let p = H2Point::normalize(SlVec::new(2.0, 0.5, 0.3)).unwrap();
        assert!((sl_inner(&p.vec(), &p.vec()) + 1.0).abs() < 1e-15);
        assert!(AdsPoint::new(E1).is_ok());
        assert!(AdsPoint::new(E2).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn vec3() -> impl Strategy<Value = SlVec> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| SlVec::new(a, b, c))
    }

    fn unit(v: SlVec) -> SlVec {
        v * (1.0 / v.norm())
    }

    proptest! {
        #[test]
        fn bracket_identities_hold(x in vec3(), y in vec3(), z in vec3()) {
            prop_assume!(x.norm() > 0.1 && y.norm() > 0.1);
            let z = orthogonal_projection(&z, &x, &y);
            prop_assume!(z.as_ref().map_or(false, |z| z.norm() > 1e-3));
            let r = bracket_identities_check(&unit(x), &unit(y), &unit(z.unwrap())).unwrap();
            prop_assert!(r.max() <= 1e-12, "{r:?}");
        }

        #[test]
        fn metric_is_minus_det(a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, d in -1.0..1.0f64) {
            let m = Mat2::new(a, b, c, d);
            prop_assert!((gl_inner(&m, &m) + m.det()).abs() <= 1e-14);
        }

        #[test]
        fn exp_lands_in_sl2(x in vec3()) {
            prop_assert!((exp_sl(&(x * 2.0)).det() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn basis_coordinates_round_trip(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64, d in -5.0..5.0f64) {
            let m = Mat2::new(a, b, c, d);
            prop_assert!((Mat2::from_basis(m.to_basis()) - m).max_abs() <= 1e-14);
        }
    }
}
