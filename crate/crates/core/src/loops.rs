//! Truncated Laurent loops in the spectral parameter, the lambda-dependent
//! Maurer-Cartan form, the split Maurer-Cartan residuals, and the two
//! factorisations: Birkhoff on loops and the pointwise big-cell (LU) split.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{bracket, Mat2, SlVec, V1};
use crate::error::{Error, Result};
use crate::grid::{fd_x, fd_y, diff1_o2, Grid2};

/// Default truncation order of loop factorisations.
pub const DEFAULT_ORDER: i32 = 8;
/// Newton pass ceiling of `birkhoff_factor`.
pub const MAX_NEWTON_PASSES: usize = 50;

/// Laurent polynomial sum_{d=lo}^{hi} A_d lambda^d with 2x2 coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentLoop {
    lo: i32,
    coeffs: Vec<Mat2>,
}

impl LaurentLoop {
    /// Coefficients for degrees lo, lo+1, ...
    pub fn new(lo: i32, coeffs: Vec<Mat2>) -> Self {
        assert!(!coeffs.is_empty(), "a loop needs at least one coefficient");
        LaurentLoop { lo, coeffs }
    }

    pub fn identity() -> Self {
        LaurentLoop::constant(Mat2::identity())
    }

    pub fn constant(m: Mat2) -> Self {
        LaurentLoop { lo: 0, coeffs: vec![m] }
    }

    pub fn monomial(d: i32, m: Mat2) -> Self {
        LaurentLoop { lo: d, coeffs: vec![m] }
    }

    /// Zero loop on the degree range [lo, hi].
    pub fn zeros(lo: i32, hi: i32) -> Self {
        LaurentLoop { lo, coeffs: vec![Mat2::zero(); (hi - lo + 1) as usize] }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    /// Coefficient of lambda^d (zero outside the stored range).
    pub fn coeff(&self, d: i32) -> Mat2 {
        if d < self.lo || d > self.hi() {
            Mat2::zero()
        } else {
            self.coeffs[(d - self.lo) as usize]
        }
    }

    pub fn set_coeff(&mut self, d: i32, m: Mat2) {
        assert!(d >= self.lo && d <= self.hi(), "degree {d} outside stored range");
        self.coeffs[(d - self.lo) as usize] = m;
    }

    pub fn coeffs(&self) -> &[Mat2] {
        &self.coeffs
    }

    pub fn eval(&self, lambda: f64) -> Mat2 {
        let mut acc = Mat2::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += *c * lambda.powi(self.lo + k as i32);
        }
        acc
    }

    /// Restriction to degrees [lo, hi] (missing degrees are zero).
    pub fn truncated(&self, lo: i32, hi: i32) -> Self {
        LaurentLoop { lo, coeffs: (lo..=hi).map(|d| self.coeff(d)).collect() }
    }

    pub fn add(&self, o: &LaurentLoop) -> LaurentLoop {
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        LaurentLoop { lo, coeffs: (lo..=hi).map(|d| self.coeff(d) + o.coeff(d)).collect() }
    }

    pub fn scale(&self, s: f64) -> LaurentLoop {
        LaurentLoop { lo: self.lo, coeffs: self.coeffs.iter().map(|c| *c * s).collect() }
    }

    /// Coefficientwise adjugate; the inverse of a loop with det = 1.
    pub fn adj(&self) -> LaurentLoop {
        LaurentLoop { lo: self.lo, coeffs: self.coeffs.iter().map(|c| c.adj()).collect() }
    }

    /// Largest coefficient entry.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Product with the result restricted to degrees [lo, hi].
    pub fn mul_within(&self, o: &LaurentLoop, lo: i32, hi: i32) -> LaurentLoop {
        let mut out = vec![Mat2::zero(); (hi - lo + 1) as usize];
        for (a, ca) in self.coeffs.iter().enumerate() {
            let da = self.lo + a as i32;
            let blo = (lo - da).max(o.lo);
            let bhi = (hi - da).min(o.hi());
            for db in blo..=bhi {
                out[(da + db - lo) as usize] += *ca * o.coeffs[(db - o.lo) as usize];
            }
        }
        LaurentLoop { lo, coeffs: out }
    }
}

/// Product of two loops; `max_order` bounds the absolute degree of the result.
pub fn loop_mul(a: &LaurentLoop, b: &LaurentLoop, max_order: Option<i32>) -> Result<LaurentLoop> {
    let lo = a.lo() + b.lo();
    let hi = a.hi() + b.hi();
    if let Some(n) = max_order {
        if lo < -n || hi > n {
            return Err(Error::TruncationOverflow { lo, hi, order: n });
        }
    }
    Ok(a.mul_within(b, lo, hi))
}

/// Maurer-Cartan data of a frame at one point, split into the e1 part (k)
/// and the span{e2,e3} part (p).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct McSplitPoint {
    pub uk: SlVec,
    pub up: SlVec,
    pub vk: SlVec,
    pub vp: SlVec,
}

impl McSplitPoint {
    /// Split F^{-1}F_x = u and F^{-1}F_y = v into their k and p parts.
    pub fn from_forms(u: SlVec, v: SlVec) -> Self {
        McSplitPoint {
            uk: V1 * u.v1,
            up: SlVec::new(0.0, u.v2, u.v3),
            vk: V1 * v.v1,
            vp: SlVec::new(0.0, v.v2, v.v3),
        }
    }

    /// Largest violation of the k/p invariants.
    pub fn split_defect(&self) -> f64 {
        let k = |v: &SlVec| v.v2.abs().max(v.v3.abs());
        k(&self.uk).max(k(&self.vk)).max(self.up.v1.abs()).max(self.vp.v1.abs())
    }
}

/// Split Maurer-Cartan data sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct McSplit {
    pub grid: Grid2,
    pub points: Vec<McSplitPoint>,
}

impl McSplit {
    pub fn new(grid: Grid2, points: Vec<McSplitPoint>) -> Result<Self> {
        if points.len() != grid.len() {
            return Err(Error::PreconditionViolated("McSplit size does not match grid".into()));
        }
        let defect = points.iter().map(|p| p.split_defect()).fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::PreconditionViolated(format!("k/p split violated by {defect:e}")));
        }
        Ok(McSplit { grid, points })
    }

    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> McSplitPoint) -> Result<Self> {
        let mut pts = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.point(i, j);
                pts.push(f(x, y));
            }
        }
        McSplit::new(grid, pts)
    }
}

/// Coefficients of the lambda-dependent form (Uk + lambda Up) dx + (Vk + lambda^{-1} Vp) dy.
pub fn hat_alpha(p: &McSplitPoint) -> (LaurentLoop, LaurentLoop) {
    let dx = LaurentLoop::new(0, vec![p.uk.to_mat(), p.up.to_mat()]);
    let dy = LaurentLoop::new(-1, vec![p.vp.to_mat(), p.vk.to_mat()]);
    (dx, dy)
}

/// Max norms of the three graded components of the flatness condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResiduals {
    /// lambda^0: d_y Uk - d_x Vk - [Up, Vp]
    pub r1: f64,
    /// lambda^1: d_y Up - [Up, Vk]
    pub r2: f64,
    /// lambda^{-1}: d_x Vp + [Uk, Vp]
    pub r3: f64,
}

impl McResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

/// Split Maurer-Cartan residuals with centred second-order differences,
/// maximised over interior nodes.
pub fn split_mc_residual(ms: &McSplit) -> Result<McResiduals> {
    let g = &ms.grid;
    g.require(3)?;
    let pick = |f: fn(&McSplitPoint) -> SlVec| ms.points.iter().map(f).collect::<Vec<_>>();
    let uk = pick(|p| p.uk);
    let up = pick(|p| p.up);
    let vk = pick(|p| p.vk);
    let vp = pick(|p| p.vp);
    let uk_y = fd_y(g, &uk, diff1_o2);
    let vk_x = fd_x(g, &vk, diff1_o2);
    let up_y = fd_y(g, &up, diff1_o2);
    let vp_x = fd_x(g, &vp, diff1_o2);
    let mut r = McResiduals { r1: 0.0, r2: 0.0, r3: 0.0 };
    for (i, j) in g.interior(1) {
        let n = g.index(i, j);
        let r1 = uk_y[n] - vk_x[n] - bracket(&up[n], &vp[n]);
        let r2 = up_y[n] - bracket(&up[n], &vk[n]);
        let r3 = vp_x[n] + bracket(&uk[n], &vp[n]);
        r.r1 = r.r1.max(r1.norm());
        r.r2 = r.r2.max(r2.norm());
        r.r3 = r.r3.max(r3.norm());
    }
    Ok(r)
}

/// P = L U with L lower-unipotent and U upper-triangular.
pub fn big_cell_factor(p: &Mat2) -> Result<(Mat2, Mat2)> {
    big_cell_factor_tol(p, 1e-12)
}

pub fn big_cell_factor_tol(p: &Mat2, tol: f64) -> Result<(Mat2, Mat2)> {
    if !(p.a11.abs() >= tol) {
        return Err(Error::NotInBigCell { nodes: vec![] });
    }
    let l = Mat2::new(1.0, 0.0, p.a21 / p.a11, 1.0);
    let u = Mat2::new(p.a11, p.a12, 0.0, p.det() / p.a11);
    Ok((l, u))
}

/// Coefficients Q_1..Q_m of Q = I + sum Q_j lambda^{-j} such that Q Phi has no
/// degrees in [-m, -1]. Q is the truncated inverse of the minus factor
/// of Phi normalised by H_-(infinity) = I. Returns None when the block
/// Toeplitz system is numerically singular (Phi outside the big cell).
pub fn minus_normalizer(phi: &LaurentLoop, m: usize) -> Option<Vec<Mat2>> {
    let n = 2 * m;
    let mut t = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DMatrix::<f64>::zeros(n, 2);
    for p in 0..m {
        for q in 0..m {
            let c = phi.coeff(q as i32 - p as i32).transpose();
            t[(2 * p, 2 * q)] = c.a11;
            t[(2 * p, 2 * q + 1)] = c.a12;
            t[(2 * p + 1, 2 * q)] = c.a21;
            t[(2 * p + 1, 2 * q + 1)] = c.a22;
        }
        let c = phi.coeff(-(p as i32) - 1).transpose();
        rhs[(2 * p, 0)] = -c.a11;
        rhs[(2 * p, 1)] = -c.a12;
        rhs[(2 * p + 1, 0)] = -c.a21;
        rhs[(2 * p + 1, 1)] = -c.a22;
    }
    let lu = t.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..n).map(|k| u[(k, k)].abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(dmin > 1e-13 * dmax) {
        return None;
    }
    let sol = lu.solve(&rhs)?;
    let q = (0..m)
        .map(|k| {
            Mat2::new(sol[(2 * k, 0)], sol[(2 * k + 1, 0)], sol[(2 * k, 1)], sol[(2 * k + 1, 1)])
        })
        .collect::<Vec<_>>();
    if q.iter().all(|c| c.is_finite()) {
        Some(q)
    } else {
        None
    }
}

/// Normalisation of the constant terms of a Birkhoff factorisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// H_-(infinity) lower-unipotent, H_+(0) upper-triangular.
    #[default]
    LowerUnipotent,
    /// H_-(infinity) = I.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffFactors {
    pub minus: LaurentLoop,
    pub plus: LaurentLoop,
    /// Max coefficient error of minus*plus - P on retained degrees.
    pub residual: f64,
    pub newton_passes: usize,
}

/// Birkhoff factorisation P = H_- H_+ with H_- in degrees [-N, 0] and
/// H_+ in degrees [0, N].
pub fn birkhoff_factor(p: &LaurentLoop, order: i32) -> Result<BirkhoffFactors> {
    birkhoff_factor_with(p, order, Normalization::LowerUnipotent)
}

pub fn birkhoff_factor_with(p: &LaurentLoop, order: i32, norm: Normalization) -> Result<BirkhoffFactors> {
    let n = order;
    if n < 1 {
        return Err(Error::InvalidParameter(format!("truncation order must be positive, got {n}")));
    }
    if p.lo() < -n || p.hi() > n {
        return Err(Error::TruncationOverflow { lo: p.lo(), hi: p.hi(), order: n });
    }
    let q = minus_normalizer(p, n as usize).ok_or(Error::NotInBigCell { nodes: vec![] })?;

    // initial guess from the linear projection
    let mut qloop = LaurentLoop::zeros(-n, 0);
    qloop.set_coeff(0, Mat2::identity());
    for (k, c) in q.iter().enumerate() {
        qloop.set_coeff(-(k as i32) - 1, *c);
    }
    let mut hm = LaurentLoop::zeros(-n, 0);
    hm.set_coeff(0, Mat2::identity());
    for k in 1..=n {
        let mut acc = Mat2::zero();
        for j in 1..=k {
            acc -= hm.coeff(-(k - j)) * qloop.coeff(-j);
        }
        hm.set_coeff(-k, acc);
    }
    let mut hp = qloop.mul_within(p, 0, n);

    let neq = (8 * n + 4) as usize;
    let scale = p.max_abs().max(1.0);
    let target = 1e-14 * scale;
    let residual_of = |hm: &LaurentLoop, hp: &LaurentLoop| -> (Vec<f64>, f64) {
        let prod = hm.mul_within(hp, -n, n);
        let mut r = Vec::with_capacity(neq);
        let mut mx: f64 = 0.0;
        for k in -n..=n {
            for e in (prod.coeff(k) - p.coeff(k)).entries() {
                mx = mx.max(e.abs());
                r.push(e);
            }
        }
        (r, mx)
    };
    let (mut r, mut res) = residual_of(&hm, &hp);
    let mut passes = 0;
    while res > target {
        if passes == MAX_NEWTON_PASSES {
            return Err(Error::NoConvergence { iterations: passes, residual: res });
        }
        passes += 1;
        let jac = birkhoff_jacobian(&hm, &hp, n);
        let rhs = DVector::from_vec(r.iter().map(|v| -v).collect());
        let dz = jac.lu().solve(&rhs).ok_or(Error::NotInBigCell { nodes: vec![] })?;
        let mut idx = 0;
        for m in 1..=n {
            let e = Mat2::new(dz[idx], dz[idx + 1], dz[idx + 2], dz[idx + 3]);
            hm.set_coeff(-m, hm.coeff(-m) + e);
            idx += 4;
        }
        for d in 0..=n {
            let e = Mat2::new(dz[idx], dz[idx + 1], dz[idx + 2], dz[idx + 3]);
            hp.set_coeff(d, hp.coeff(d) + e);
            idx += 4;
        }
        let step = dz.amax();
        let (r2, res2) = residual_of(&hm, &hp);
        r = r2;
        let stalled = step < 1e-15 * scale || (res2 >= res && res2 < 1e-12 * scale);
        res = res2;
        if stalled {
            break;
        }
    }

    if norm == Normalization::LowerUnipotent {
        let (l, u) = big_cell_factor(&hp.coeff(0))?;
        let linv = l.adj();
        hm = hm.mul_within(&LaurentLoop::constant(l), -n, 0);
        hm.set_coeff(0, l);
        hp = LaurentLoop::constant(linv).mul_within(&hp, 0, n);
        hp.set_coeff(0, u);
        res = residual_of(&hm, &hp).1;
    }
    Ok(BirkhoffFactors { minus: hm, plus: hp, residual: res, newton_passes: passes })
}

/// Jacobian of (H_- H_+)_k over k in [-N, N] with respect to the free
/// coefficients H_-(-1..-N), H_+(0..N).
fn birkhoff_jacobian(hm: &LaurentLoop, hp: &LaurentLoop, n: i32) -> DMatrix<f64> {
    let neq = (8 * n + 4) as usize;
    let mut jac = DMatrix::<f64>::zeros(neq, neq);
    let unit = |e: usize| {
        let mut v = [0.0; 4];
        v[e] = 1.0;
        Mat2::from_entries(v)
    };
    let row = |k: i32| ((k + n) * 4) as usize;
    let mut col = 0usize;
    for m in 1..=n {
        for e in 0..4 {
            let de = unit(e);
            for k in -m..=(n - m) {
                let d = de * hp.coeff(k + m);
                for (s, v) in d.entries().iter().enumerate() {
                    jac[(row(k) + s, col)] = *v;
                }
            }
            col += 1;
        }
    }
    for d0 in 0..=n {
        for e in 0..4 {
            let de = unit(e);
            for k in (d0 - n)..=d0 {
                let d = hm.coeff(k - d0) * de;
                for (s, v) in d.entries().iter().enumerate() {
                    jac[(row(k) + s, col)] = *v;
                }
            }
            col += 1;
        }
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{E_MINUS, E_PLUS, V2, V3};

    fn sample_loop(lo: i32, hi: i32, seed: f64, eps: f64) -> LaurentLoop {
        let mut c = Vec::new();
        for d in lo..=hi {
            let s = seed + d as f64;
            let m = Mat2::new((1.3 * s).sin(), (2.1 * s).cos(), (0.7 * s + 1.0).sin(), (1.9 * s).cos()) * eps;
            c.push(if d == 0 { Mat2::identity() + m } else { m });
        }
        LaurentLoop::new(lo, c)
    }

    #[test]
    fn multiplication_examples() {
        let b = sample_loop(-2, 3, 0.4, 1.0);
        assert_eq!(loop_mul(&LaurentLoop::identity(), &b, None).unwrap(), b);
        let p = loop_mul(&LaurentLoop::monomial(1, E_PLUS), &LaurentLoop::monomial(-1, E_MINUS), None).unwrap();
        assert_eq!(p, LaurentLoop::constant(Mat2::new(1.0, 0.0, 0.0, 0.0)));
        let a = sample_loop(-1, 2, 1.7, 1.0);
        let ab = loop_mul(&a, &b, None).unwrap();
        assert!((ab.eval(2.0) - a.eval(2.0) * b.eval(2.0)).max_abs() < 1e-12 * ab.eval(2.0).max_abs());
        assert!((ab.eval(1.0) - ab.coeffs().iter().fold(Mat2::zero(), |s, c| s + *c)).max_abs() < 1e-14);
        assert!(matches!(loop_mul(&a, &b, Some(4)), Err(Error::TruncationOverflow { .. })));
    }

    #[test]
    fn hat_alpha_examples() {
        let a = SlVec::new(0.0, -0.5, 0.2);
        let p = McSplitPoint { up: a, ..Default::default() };
        let (dx, dy) = hat_alpha(&p);
        assert_eq!(dx.coeff(1), a.to_mat());
        assert_eq!(dx.coeff(0), Mat2::zero());
        assert_eq!(dy.max_abs(), 0.0);
        let q = McSplitPoint { uk: V1 * 0.3, up: a, vk: V1 * -0.1, vp: V3 * 0.4 };
        let (dx, dy) = hat_alpha(&q);
        assert_eq!(dx.eval(1.0), (q.uk + q.up).to_mat());
        assert_eq!(dy.eval(1.0), (q.vk + q.vp).to_mat());
        assert_eq!((dx.lo(), dx.hi(), dy.lo(), dy.hi()), (0, 1, -1, 0));
    }

    #[test]
    fn residual_examples() {
        let g = Grid2::square(0.0, 1.0, 0.1).unwrap();
        let ms = McSplit::from_fn(g, |x, _| McSplitPoint {
            uk: V1 * x.sin(),
            up: V2 * x.cos(),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(split_mc_residual(&ms).unwrap().max(), 0.0);
        let ms = McSplit::from_fn(g, |_, _| McSplitPoint { up: V2, vp: V3, ..Default::default() }).unwrap();
        let r = split_mc_residual(&ms).unwrap();
        assert!((r.r1 - 2.0).abs() < 1e-14);
        let tiny = Grid2::square(0.0, 0.1, 0.1).unwrap();
        let ms = McSplit::from_fn(tiny, |_, _| McSplitPoint::default()).unwrap();
        assert!(matches!(split_mc_residual(&ms), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn big_cell_examples() {
        let (l, u) = big_cell_factor(&Mat2::identity()).unwrap();
        assert_eq!((l, u), (Mat2::identity(), Mat2::identity()));
        let (l, u) = big_cell_factor(&Mat2::new(2.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(l, Mat2::new(1.0, 0.0, 0.5, 1.0));
        assert_eq!(u, Mat2::new(2.0, 1.0, 0.0, 0.5));
        assert_eq!(l * u, Mat2::new(2.0, 1.0, 1.0, 1.0));
        assert!(matches!(big_cell_factor(&Mat2::new(0.0, 1.0, -1.0, 0.0)), Err(Error::NotInBigCell { .. })));
    }

    #[test]
    fn birkhoff_examples() {
        let f = birkhoff_factor(&LaurentLoop::identity(), 8).unwrap();
        assert_eq!(f.minus.truncated(-8, 0), LaurentLoop::identity().truncated(-8, 0));
        assert_eq!(f.plus.truncated(0, 8), LaurentLoop::identity().truncated(0, 8));

        let a = 0.3;
        let p = LaurentLoop::new(0, vec![Mat2::identity(), E_PLUS * a]);
        let f = birkhoff_factor(&p, 8).unwrap();
        assert!(f.minus.truncated(-8, 0).add(&LaurentLoop::identity().scale(-1.0)).max_abs() < 1e-14);
        assert!(f.plus.add(&p.scale(-1.0)).max_abs() < 1e-14);

        let (a, b) = (0.05, -0.08);
        let m = LaurentLoop::new(-1, vec![E_MINUS * a, Mat2::identity()]);
        let pl = LaurentLoop::new(0, vec![Mat2::identity(), E_PLUS * b]);
        let p = loop_mul(&m, &pl, None).unwrap();
        let f = birkhoff_factor_with(&p, 8, Normalization::Identity).unwrap();
        assert!(f.residual <= 1e-10);
        assert!(f.minus.add(&m.scale(-1.0)).max_abs() < 1e-12);
        assert!(f.plus.add(&pl.scale(-1.0)).max_abs() < 1e-12);
    }

    #[test]
    fn birkhoff_normalisation_is_exact() {
        let p = sample_loop(-3, 4, 0.9, 0.08);
        let f = birkhoff_factor(&p, 8).unwrap();
        assert!(f.residual <= 1e-10, "{}", f.residual);
        let m0 = f.minus.coeff(0);
        assert_eq!((m0.a11, m0.a12, m0.a22), (1.0, 0.0, 1.0));
        assert_eq!(f.plus.coeff(0).a21, 0.0);
        assert!(f.minus.hi() <= 0 && f.minus.lo() >= -8);
        assert!(f.plus.lo() >= 0 && f.plus.hi() <= 8);
    }

    #[test]
    fn normalizer_kills_negative_degrees() {
        let p = sample_loop(-4, 4, 0.2, 0.2);
        let m = 12;
        let q = minus_normalizer(&p, m).unwrap();
        let mut ql = LaurentLoop::zeros(-(m as i32), 0);
        ql.set_coeff(0, Mat2::identity());
        for (k, c) in q.iter().enumerate() {
            ql.set_coeff(-(k as i32) - 1, *c);
        }
        let qp = ql.mul_within(&p, -(m as i32), -1);
        assert!(qp.max_abs() < 1e-13);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn mat(scale: f64) -> impl Strategy<Value = Mat2> {
        proptest::array::uniform4(-1.0..1.0f64).prop_map(move |e| Mat2::from_entries(e) * scale)
    }

    proptest! {
        #[test]
        fn big_cell_multiply_back(p in mat(1.0)) {
            prop_assume!(p.a11.abs() > 0.05);
            let (l, u) = big_cell_factor(&p).unwrap();
            prop_assert!((l * u - p).max_abs() <= 1e-13 * p.max_abs().max(1.0));
            prop_assert_eq!((l.a11, l.a12, l.a22, u.a21), (1.0, 0.0, 1.0, 0.0));
        }

        #[test]
        fn birkhoff_multiply_back(d in 1i32..=4, cs in proptest::collection::vec(mat(0.05), 9)) {
            let coeffs: Vec<Mat2> = (-d..=d)
                .map(|k| if k == 0 { Mat2::identity() + cs[4] } else { cs[(k + 4) as usize] })
                .collect();
            let p = LaurentLoop::new(-d, coeffs);
            let f = birkhoff_factor(&p, 8).unwrap();
            let prod = f.minus.mul_within(&f.plus, -8, 8);
            for k in -8..=8 {
                prop_assert!((prod.coeff(k) - p.coeff(k)).max_abs() <= 1e-10);
            }
            let m0 = f.minus.coeff(0);
            prop_assert_eq!((m0.a11, m0.a12, m0.a22, f.plus.coeff(0).a21), (1.0, 0.0, 1.0, 0.0));
        }
    }
}
