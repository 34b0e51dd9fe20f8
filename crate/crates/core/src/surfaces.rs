//! Spacelike surfaces in AdS3 = SL(2,R) with a prescribed harmonic Gauss map.
//!
//! The normal of f with Gauss map nu is the left translate N = f nu. Curvature
//! is reported as K + 1 = det II / det I, where K is the intrinsic curvature.

use crate::algebra::{ad_unimodular, bracket, gl_inner, sl_inner, Mat2, SlVec, E0};
use crate::error::{Error, Result};
use crate::grid::{diff1_o2, diff1_o4, fd_x, fd_y, Grid2, GridField};
use crate::lie::integrate_sampled;

/// Threshold below which a node counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceField {
    pub grid: Grid2,
    pub f: Vec<Mat2>,
    pub normal: Vec<Mat2>,
}

/// Largest violations of the SurfaceField invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceDefects {
    pub det: f64,
    pub normal_unit: f64,
    pub normal_point: f64,
    pub normal_tangent: f64,
}

impl SurfaceField {
    /// Surface with normal f nu.
    pub fn with_gauss_map(grid: Grid2, f: Vec<Mat2>, nu: &[SlVec]) -> Self {
        let normal = f.iter().zip(nu).map(|(f, n)| *f * n.to_mat()).collect();
        SurfaceField { grid, f, normal }
    }

    /// Gauss map f^{-1} N.
    pub fn gauss_map(&self) -> Vec<SlVec> {
        self.f.iter().zip(&self.normal).map(|(f, n)| (f.adj() * *n).sl_part()).collect()
    }

    pub fn f_field(&self) -> GridField<Mat2> {
        GridField::new(self.grid, self.f.clone())
    }

    pub fn defects(&self) -> SurfaceDefects {
        let fx = fd_x(&self.grid, &self.f, diff1_o4);
        let fy = fd_y(&self.grid, &self.f, diff1_o4);
        let mut d = SurfaceDefects { det: 0.0, normal_unit: 0.0, normal_point: 0.0, normal_tangent: 0.0 };
        for k in 0..self.f.len() {
            let (f, n) = (&self.f[k], &self.normal[k]);
            d.det = d.det.max((f.det() - 1.0).abs());
            d.normal_unit = d.normal_unit.max((gl_inner(n, n) + 1.0).abs());
            d.normal_point = d.normal_point.max(gl_inner(n, f).abs());
            d.normal_tangent = d.normal_tangent.max(gl_inner(&fx[k], n).abs().max(gl_inner(&fy[k], n).abs()));
        }
        d
    }
}

/// Integrate f^{-1} df = bx dx + by dy: first along the base row, then up
/// and down every column.
pub fn integrate_form(grid: &Grid2, bx: &[SlVec], by: &[SlVec], base: (usize, usize), init: Mat2) -> Vec<Mat2> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (i0, j0) = base;
    let row_b: Vec<SlVec> = (0..nx).map(|i| bx[grid.index(i, j0)]).collect();
    let row = integrate_sampled(&row_b, grid.x.step, init, i0);
    let mut out = vec![Mat2::zero(); grid.len()];
    for i in 0..nx {
        let col_b: Vec<SlVec> = (0..ny).map(|j| by[grid.index(i, j)]).collect();
        let col = integrate_sampled(&col_b, grid.y.step, row[i], j0);
        for j in 0..ny {
            out[grid.index(i, j)] = col[j];
        }
    }
    out
}

/// Same integration with columns first; used for path-independence checks.
pub fn integrate_form_columns_first(
    grid: &Grid2,
    bx: &[SlVec],
    by: &[SlVec],
    base: (usize, usize),
    init: Mat2,
) -> Vec<Mat2> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (i0, j0) = base;
    let col_b: Vec<SlVec> = (0..ny).map(|j| by[grid.index(i0, j)]).collect();
    let col = integrate_sampled(&col_b, grid.y.step, init, j0);
    let mut out = vec![Mat2::zero(); grid.len()];
    for j in 0..ny {
        let row_b: Vec<SlVec> = (0..nx).map(|i| bx[grid.index(i, j)]).collect();
        let row = integrate_sampled(&row_b, grid.x.step, col[j], i0);
        for i in 0..nx {
            out[grid.index(i, j)] = row[i];
        }
    }
    out
}

/// max over interior nodes of ||d_y bx - d_x by - [bx, by]|| (centred, 2nd order).
pub fn flatness_residual(grid: &Grid2, bx: &[SlVec], by: &[SlVec]) -> Result<f64> {
    grid.require(3)?;
    let bx_y = fd_y(grid, bx, diff1_o2);
    let by_x = fd_x(grid, by, diff1_o2);
    let mut r: f64 = 0.0;
    for (i, j) in grid.interior(1) {
        let n = grid.index(i, j);
        r = r.max((bx_y[n] - by_x[n] - bracket(&bx[n], &by[n])).norm());
    }
    Ok(r)
}

/// Node nearest to (x0, y0).
pub fn base_node(grid: &Grid2, x0: f64, y0: f64) -> (usize, usize) {
    (grid.x.nearest(x0), grid.y.nearest(y0))
}

/// Immersion test for a Gauss map: [nu_x, nu_y] must not vanish.
pub fn degenerate_nodes(grid: &Grid2, nu_x: &[SlVec], nu_y: &[SlVec]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let n = grid.index(i, j);
            let w = bracket(&nu_x[n], &nu_y[n]).norm();
            if !(w > 1e-6 * (nu_x[n].norm() * nu_y[n].norm()).max(1e-3)) {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// One-forms of the Case 1 reconstruction.
pub fn case1_forms(nu: &GridField<SlVec>, r: f64) -> Result<(Vec<SlVec>, Vec<SlVec>)> {
    if r.abs() < 1e-12 || (r + 1.0).abs() < 1e-12 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r = {r} is excluded (r must avoid 0 and -1)")));
    }
    let nx = nu.deriv_x();
    let ny = nu.deriv_y();
    let bad = degenerate_nodes(&nu.grid, &nx, &ny);
    if !bad.is_empty() {
        return Err(Error::DegenerateGaussMap { nodes: bad });
    }
    let bx = nu.values.iter().zip(&nx).map(|(v, d)| bracket(v, d) * (0.25 / r)).collect();
    let by = nu.values.iter().zip(&ny).map(|(v, d)| bracket(v, d) * (-0.25 / (r + 1.0))).collect();
    Ok((bx, by))
}

/// Surface with Gauss map nu and f^{-1}f_x = [nu,nu_x]/(4r),
/// f^{-1}f_y = -[nu,nu_y]/(4(r+1)); f = init at `base`.
pub fn reconstruct_case1(nu: &GridField<SlVec>, r: f64, init: Mat2, base: (usize, usize)) -> Result<SurfaceField> {
    let (bx, by) = case1_forms(nu, r)?;
    let f = integrate_form(&nu.grid, &bx, &by, base, init);
    Ok(SurfaceField::with_gauss_map(nu.grid, f, &nu.values))
}

/// Per-node omega of the Case 2 construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaField {
    pub grid: Grid2,
    pub omega: Vec<SlVec>,
    pub a: f64,
    pub b: f64,
}

/// omega = Ad_F(w2 e2 + w3 e3) with w2 = -A tanh x - B sech x,
/// w3 = -A sech x + B tanh x.
pub fn solve_omega(frames: &GridField<Mat2>, a: f64, b: f64) -> OmegaField {
    let g = frames.grid;
    let mut omega = Vec::with_capacity(g.len());
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let x = g.x.coord(i);
            let local = omega_components(x, a, b);
            omega.push(ad_unimodular(&frames.at(i, j), &local));
        }
    }
    OmegaField { grid: g, omega, a, b }
}

/// Frame components (0, w2, w3) of omega at x.
pub fn omega_components(x: f64, a: f64, b: f64) -> SlVec {
    let (th, sh) = (x.tanh(), 1.0 / x.cosh());
    SlVec::new(0.0, -a * th - b * sh, -a * sh + b * th)
}

/// Surface with f^{-1}f_x = -[nu,nu_x]/4 and f^{-1}f_y = [nu, omega] for a
/// Gauss map that depends on x only.
pub fn reconstruct_case2(nu: &GridField<SlVec>, omega: &OmegaField, init: Mat2, base: (usize, usize)) -> Result<SurfaceField> {
    let g = nu.grid;
    let nx = nu.deriv_x();
    let ny = nu.deriv_y();
    let scale = nx.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let worst = ny.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if worst > 1e-6 * scale {
        return Err(Error::PreconditionViolated(format!("nu_y does not vanish (max {worst:e})")));
    }
    let mut bad = Vec::new();
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let n = g.index(i, j);
            if !(bracket(&nx[n], &omega.omega[n]).norm() > DEGENERACY_TOL) {
                bad.push((i, j));
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::DegenerateOmega { nodes: bad });
    }
    let bx: Vec<SlVec> = nu.values.iter().zip(&nx).map(|(v, d)| bracket(v, d) * -0.25).collect();
    let by: Vec<SlVec> = nu.values.iter().zip(&omega.omega).map(|(v, w)| bracket(v, w)).collect();
    let f = integrate_form(&g, &bx, &by, base, init);
    Ok(SurfaceField::with_gauss_map(g, f, &nu.values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Spacelike,
    Lorentzian,
    Degenerate,
}

impl Causal {
    pub fn label(&self) -> &'static str {
        match self {
            Causal::Spacelike => "spacelike",
            Causal::Lorentzian => "lorentzian",
            Causal::Degenerate => "degenerate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "spacelike" => Some(Causal::Spacelike),
            "lorentzian" => Some(Causal::Lorentzian),
            "degenerate" => Some(Causal::Degenerate),
            _ => None,
        }
    }
}

/// Symmetric 2x2 form stored as (g11, g12, g22).
pub type Sym2 = [f64; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGeometry {
    pub grid: Grid2,
    pub first: Vec<Sym2>,
    pub second: Vec<Sym2>,
    /// Shape operator I^{-1} II, row-major.
    pub shape: Vec<[f64; 4]>,
    /// det II / det I
    pub k_plus_one: Vec<f64>,
    /// trace(S) / 2
    pub mean: Vec<f64>,
    pub causal: Vec<Causal>,
}

pub fn fundamental_forms(sf: &SurfaceField) -> Result<SurfaceGeometry> {
    let g = sf.grid;
    g.require(5)?;
    let fx = fd_x(&g, &sf.f, diff1_o4);
    let fy = fd_y(&g, &sf.f, diff1_o4);
    let fxx = fd_x(&g, &sf.f, crate::grid::diff2_o4);
    let fyy = fd_y(&g, &sf.f, crate::grid::diff2_o4);
    let fxy = fd_y(&g, &fx, diff1_o4);
    let mut geo = SurfaceGeometry {
        grid: g,
        first: Vec::with_capacity(g.len()),
        second: Vec::with_capacity(g.len()),
        shape: Vec::with_capacity(g.len()),
        k_plus_one: Vec::with_capacity(g.len()),
        mean: Vec::with_capacity(g.len()),
        causal: Vec::with_capacity(g.len()),
    };
    for k in 0..g.len() {
        let n = &sf.normal[k];
        let i1 = [gl_inner(&fx[k], &fx[k]), gl_inner(&fx[k], &fy[k]), gl_inner(&fy[k], &fy[k])];
        let i2 = [gl_inner(&fxx[k], n), gl_inner(&fxy[k], n), gl_inner(&fyy[k], n)];
        let det1 = i1[0] * i1[2] - i1[1] * i1[1];
        let det2 = i2[0] * i2[2] - i2[1] * i2[1];
        let scale = (i1[0] * i1[0] + 2.0 * i1[1] * i1[1] + i1[2] * i1[2]).max(1e-300);
        let causal = if det1 > DEGENERACY_TOL * scale && i1[0] > 0.0 {
            Causal::Spacelike
        } else if det1 < -DEGENERACY_TOL * scale {
            Causal::Lorentzian
        } else {
            Causal::Degenerate
        };
        if causal == Causal::Degenerate {
            geo.shape.push([f64::NAN; 4]);
            geo.k_plus_one.push(f64::NAN);
            geo.mean.push(f64::NAN);
        } else {
            let inv = [i1[2] / det1, -i1[1] / det1, -i1[1] / det1, i1[0] / det1];
            let s = [
                inv[0] * i2[0] + inv[1] * i2[1],
                inv[0] * i2[1] + inv[1] * i2[2],
                inv[2] * i2[0] + inv[3] * i2[1],
                inv[2] * i2[1] + inv[3] * i2[2],
            ];
            geo.shape.push(s);
            geo.k_plus_one.push(det2 / det1);
            geo.mean.push(0.5 * (s[0] + s[3]));
        }
        geo.first.push(i1);
        geo.second.push(i2);
        geo.causal.push(causal);
    }
    Ok(geo)
}

/// Mean, standard deviation and extreme deviation of finite values at nodes
/// at least `margin` from the edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStats {
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

pub fn interior_stats(grid: &Grid2, values: &[f64], margin: usize) -> FieldStats {
    let vals: Vec<f64> = grid.interior(margin).map(|(i, j)| values[grid.index(i, j)]).filter(|v| v.is_finite()).collect();
    let n = vals.len().max(1) as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    FieldStats {
        mean,
        stddev: var.sqrt(),
        min: vals.iter().cloned().fold(f64::INFINITY, f64::min),
        max: vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        count: vals.len(),
    }
}

/// Least-squares ratios r, s with Up = r w1 and Vp = s w2, where
/// f^{-1}f_x = Ad_F w1 and f^{-1}f_y = Ad_F w2.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRatios {
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// max over interior nodes of |1 + r + s|
    pub max_sum_defect: f64,
    pub r_stats: FieldStats,
    pub s_stats: FieldStats,
    /// Largest relative residual of the two least-squares fits.
    pub fit_residual: f64,
}

pub fn frame_ratios(sf: &SurfaceField, nu: &GridField<SlVec>, frames: &GridField<Mat2>) -> Result<FrameRatios> {
    let g = sf.grid;
    g.require(5)?;
    let fx = fd_x(&g, &sf.f, diff1_o4);
    let fy = fd_y(&g, &sf.f, diff1_o4);
    let nx = nu.deriv_x();
    let ny = nu.deriv_y();
    let mut r = Vec::with_capacity(g.len());
    let mut s = Vec::with_capacity(g.len());
    let mut bad = Vec::new();
    let mut fit: f64 = 0.0;
    for k in 0..g.len() {
        let finv = frames.values[k].adj();
        let fi = sf.f[k].adj();
        let w1 = ad_unimodular(&finv, &(fi * fx[k]).sl_part());
        let w2 = ad_unimodular(&finv, &(fi * fy[k]).sl_part());
        let up = ad_unimodular(&finv, &(bracket(&nu.values[k], &nx[k]) * 0.25));
        let vp = ad_unimodular(&finv, &(bracket(&nu.values[k], &ny[k]) * 0.25));
        let (n1, n2) = (w1.dot_euclid(&w1), w2.dot_euclid(&w2));
        if !(n1 > 1e-24 && n2 > 1e-24) {
            bad.push((k % g.nx(), k / g.nx()));
            r.push(f64::NAN);
            s.push(f64::NAN);
            continue;
        }
        let rk = up.dot_euclid(&w1) / n1;
        let sk = vp.dot_euclid(&w2) / n2;
        fit = fit.max((up - w1 * rk).norm() / up.norm().max(1e-300));
        fit = fit.max((vp - w2 * sk).norm() / vp.norm().max(1e-300));
        r.push(rk);
        s.push(sk);
    }
    if !bad.is_empty() {
        return Err(Error::DegenerateTangent { nodes: bad });
    }
    let sum: Vec<f64> = r.iter().zip(&s).map(|(a, b)| 1.0 + a + b).collect();
    let sum_stats = interior_stats(&g, &sum, 2);
    Ok(FrameRatios {
        max_sum_defect: sum_stats.max.abs().max(sum_stats.min.abs()),
        r_stats: interior_stats(&g, &r, 2),
        s_stats: interior_stats(&g, &s, 2),
        fit_residual: fit,
        r,
        s,
    })
}

/// Max over nodes of |<f^{-1} df, nu>| using 4th-order differences.
pub fn gauss_map_orthogonality(sf: &SurfaceField, nu: &[SlVec]) -> f64 {
    let fx = fd_x(&sf.grid, &sf.f, diff1_o4);
    let fy = fd_y(&sf.grid, &sf.f, diff1_o4);
    let mut m: f64 = 0.0;
    for k in 0..sf.f.len() {
        let fi = sf.f[k].adj();
        m = m.max(sl_inner(&(fi * fx[k]).sl_part(), &nu[k]).abs());
        m = m.max(sl_inner(&(fi * fy[k]).sl_part(), &nu[k]).abs());
    }
    m
}

/// cos(theta) e0 + sin(theta) e1, the Case 2 example's initial point.
pub fn case2_initial(theta: f64) -> Mat2 {
    E0 * theta.cos() + crate::algebra::E1 * theta.sin()
}

/// exp of the plane span(e2, e3): a totally geodesic spacelike patch with
/// constant normal e1.
pub fn geodesic_patch(grid: Grid2) -> SurfaceField {
    use crate::algebra::{exp_sl, V1, V2, V3};
    let f = (0..grid.len())
        .map(|k| {
            let (x, y) = grid.point(k % grid.nx(), k / grid.nx());
            exp_sl(&(V2 * x + V3 * y))
        })
        .collect();
    SurfaceField { grid, f, normal: vec![V1.to_mat(); grid.len()] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::V1;

    #[test]
    fn totally_geodesic_patch() {
        let g = Grid2::square(-0.5, 0.5, 0.05).unwrap();
        let sf = geodesic_patch(g);
        assert!(sf.defects().normal_tangent < 1e-12);
        let geo = fundamental_forms(&sf).unwrap();
        let st = interior_stats(&g, &geo.k_plus_one, 0);
        assert!(st.max.abs() < 1e-8 && st.min.abs() < 1e-8);
        assert!(geo.causal.iter().all(|c| *c == Causal::Spacelike));
    }

    #[test]
    fn r_outside_excluded_values() {
        let g = Grid2::square(0.0, 1.0, 0.1).unwrap();
        let nu = GridField::from_fn(g, |_, _| V1);
        assert!(matches!(reconstruct_case1(&nu, 0.0, E0, (0, 0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(reconstruct_case1(&nu, -1.0, E0, (0, 0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(reconstruct_case1(&nu, 2.0, E0, (0, 0)), Err(Error::DegenerateGaussMap { .. })));
    }

    #[test]
    fn omega_closed_form_solves_its_ode() {
        // RK4 on w2' = sech x w3, w3' = -sech x w2
        let (a, b) = (0.3, -0.7);
        let h = 1e-3;
        let rhs = |x: f64, w: [f64; 2]| [w[1] / x.cosh(), -w[0] / x.cosh()];
        let start = omega_components(-1.0, a, b);
        let mut w = [start.v2, start.v3];
        let mut x = -1.0;
        for _ in 0..2000 {
            let k1 = rhs(x, w);
            let k2 = rhs(x + h / 2.0, [w[0] + h / 2.0 * k1[0], w[1] + h / 2.0 * k1[1]]);
            let k3 = rhs(x + h / 2.0, [w[0] + h / 2.0 * k2[0], w[1] + h / 2.0 * k2[1]]);
            let k4 = rhs(x + h, [w[0] + h * k3[0], w[1] + h * k3[1]]);
            for c in 0..2 {
                w[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            }
            x += h;
        }
        let end = omega_components(1.0, a, b);
        assert!((w[0] - end.v2).abs() < 1e-9 && (w[1] - end.v3).abs() < 1e-9);
    }
}
