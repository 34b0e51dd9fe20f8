//! Construction of a harmonic map from Cauchy data along x = y.
//!
//! One loop-valued solution X of X' = X A(t, lambda) from the initial frame
//! serves both null directions. At each node Phi = X(x)^{-1} X(y) is split
//! as H_- H_+ with H_-(infinity) = I, the frame is F = X(x) H_- at
//! lambda = 1, and nu = Ad_F e1.

use std::sync::Mutex;

use rayon::prelude::*;

use crate::algebra::{ad_action, bracket, Mat2, SlVec, V1};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid2, GridField};
use crate::harmonic::abc::{abc_from_data, AbcCoefficients, PotentialCoeffs};
use crate::harmonic::curve::CauchyData1D;
use crate::lie::{integrate_loop, integrate_potential};
use crate::loops::{big_cell_factor, minus_normalizer, LaurentLoop};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorPath {
    /// Birkhoff split of the loop Phi, evaluated at lambda = 1.
    Loop,
    /// LU split of Phi at lambda = 1 only.
    PointwiseAtOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DalembertOptions {
    pub path: FactorPath,
    /// Number of negative loop coefficients solved for.
    pub order: usize,
    /// Degree bound kept while integrating the loop equation.
    pub loop_degree: i32,
    /// RK4 steps per grid step for the loop equation.
    pub substeps: usize,
}

impl Default for DalembertOptions {
    fn default() -> Self {
        DalembertOptions { path: FactorPath::Loop, order: 20, loop_degree: 32, substeps: 2 }
    }
}

#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    /// nu with analytic derivative caches on the loop path.
    pub nu: GridField<SlVec>,
    pub frames: GridField<Mat2>,
    /// Parameter of the common initial value X(t0) = Y(t0).
    pub base: f64,
}

pub fn dalembert_solve(cd: &CauchyData1D, grid: &Grid2) -> Result<HarmonicSolution> {
    let abc = abc_from_data(cd)?;
    dalembert_solve_with(&abc, grid, &DalembertOptions::default())
}

/// Parameter axis covering both grid axes, with the offsets of each.
pub(crate) fn diagonal_axis(grid: &Grid2) -> Result<(Axis, usize, usize)> {
    let lo = grid.x.start.min(grid.y.start);
    let hi = grid.x.end().max(grid.y.end());
    let t = Axis::from_range(lo, hi, grid.x.step)?;
    let ox = t.lattice_offset(&grid.x);
    let oy = t.lattice_offset(&grid.y);
    match (ox, oy) {
        (Some(a), Some(b)) if a >= 0 && b >= 0 => Ok((t, a as usize, b as usize)),
        _ => Err(Error::InvalidParameter(
            "x and y axes must share one step and lattice so the diagonal is sampled".into(),
        )),
    }
}

pub fn dalembert_solve_with(abc: &AbcCoefficients, grid: &Grid2, opts: &DalembertOptions) -> Result<HarmonicSolution> {
    let (axis, ox, oy) = diagonal_axis(grid)?;
    let (dlo, dhi) = abc.source().domain();
    if axis.start < dlo - 1e-12 || axis.end() > dhi + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "domain [{}, {}] leaves the data interval [{dlo}, {dhi}]",
            axis.start,
            axis.end()
        )));
    }
    let base = axis.nearest(0.0);
    let t0 = axis.coord(base);
    let k = abc.initial_frame(t0)?;

    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let pot = |t: f64| -> PotentialCoeffs {
        abc.potential(t).unwrap_or_else(|e| {
            failure.lock().unwrap().get_or_insert(e);
            PotentialCoeffs { minus: SlVec::zero(), zero: SlVec::zero(), plus: SlVec::zero() }
        })
    };
    let nodes: Vec<PotentialCoeffs> = axis.coords().iter().map(|t| pot(*t)).collect();
    let xm = integrate_potential(&|t| pot(t).at_one(), k, &axis, base);
    let xl: Vec<LaurentLoop> = if opts.path == FactorPath::Loop {
        integrate_loop(&|t| pot(t).to_loop(), k, &axis, base, opts.loop_degree, opts.substeps)
    } else {
        vec![]
    };
    if let Some(e) = failure.lock().unwrap().take() {
        return Err(e);
    }

    let (nx, ny) = (grid.nx(), grid.ny());
    let m = opts.order as i32;
    let rows: Vec<Vec<Option<(Mat2, SlVec, SlVec, SlVec)>>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let iy = oy + j;
            (0..nx)
                .map(|i| {
                    let ix = ox + i;
                    match opts.path {
                        FactorPath::Loop => {
                            let (hminus_at_one, hp0) = if ix == iy {
                                (Mat2::identity(), Mat2::identity())
                            } else {
                                let phi = xl[ix].adj().mul_within(&xl[iy], -m, m);
                                let q = minus_normalizer(&phi, opts.order)?;
                                let mut q1 = Mat2::identity();
                                let mut hp0 = phi.coeff(0);
                                for (jj, c) in q.iter().enumerate() {
                                    q1 += *c;
                                    hp0 += *c * phi.coeff(jj as i32 + 1);
                                }
                                (q1.inverse().ok()?, hp0)
                            };
                            let f = (xm[ix] * hminus_at_one).unimodular();
                            let nu = ad_action(&f, &V1).ok()?;
                            let up = nodes[ix].plus;
                            let vp = ad_action(&hp0, &nodes[iy].minus).ok()?;
                            let nu_x = ad_action(&f, &bracket(&up, &V1)).ok()?;
                            let nu_y = ad_action(&f, &bracket(&vp, &V1)).ok()?;
                            Some((f, nu, nu_x, nu_y))
                        }
                        FactorPath::PointwiseAtOne => {
                            let phi = xm[ix].adj() * xm[iy];
                            let (l, _) = big_cell_factor(&phi).ok()?;
                            let f = (xm[ix] * l).unimodular();
                            let nu = ad_action(&f, &V1).ok()?;
                            Some((f, nu, SlVec::zero(), SlVec::zero()))
                        }
                    }
                })
                .collect()
        })
        .collect();

    let mut bad = Vec::new();
    let mut frames = Vec::with_capacity(grid.len());
    let mut nu = Vec::with_capacity(grid.len());
    let mut dx = Vec::with_capacity(grid.len());
    let mut dy = Vec::with_capacity(grid.len());
    for (j, row) in rows.into_iter().enumerate() {
        for (i, v) in row.into_iter().enumerate() {
            match v {
                Some((f, n, a, b)) if f.is_finite() && n.is_finite() => {
                    frames.push(f);
                    nu.push(n);
                    dx.push(a);
                    dy.push(b);
                }
                _ => {
                    bad.push((i, j));
                    frames.push(Mat2::identity());
                    nu.push(V1);
                    dx.push(SlVec::zero());
                    dy.push(SlVec::zero());
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::NotInBigCell { nodes: bad });
    }
    let mut field = GridField::new(*grid, nu);
    if opts.path == FactorPath::Loop {
        field = field.with_derivatives(dx, dy);
    }
    Ok(HarmonicSolution { nu: field, frames: GridField::new(*grid, frames), base: t0 })
}
