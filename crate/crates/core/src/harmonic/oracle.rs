//! Second-order characteristic-rectangle marching for nu_xy = <nu_x, nu_y> nu,
//! started from the Cauchy data on the diagonal. Independent of the loop
//! construction; used to cross-check it.

use crate::algebra::{bracket, sl_inner, SlVec};
use crate::error::{Error, Result};
use crate::grid::{Grid2, GridField};
use crate::harmonic::curve::CauchyData1D;
use crate::harmonic::dalembert::diagonal_axis;

fn to_h2(v: SlVec) -> SlVec {
    let q = sl_inner(&v, &v);
    if q < 0.0 {
        v * (1.0 / (-q).sqrt())
    } else {
        v
    }
}

/// Source term <nu_x, nu_y> nu at the centre of a cell from its corners
/// (lower-left, lower-right, upper-left, upper-right).
fn cell_source(ll: SlVec, lr: SlVec, ul: SlVec, ur: SlVec, h: f64) -> SlVec {
    let nx = ((lr - ll) + (ur - ul)) * (0.5 / h);
    let ny = ((ul - ll) + (ur - lr)) * (0.5 / h);
    let mid = (ll + lr + ul + ur) * 0.25;
    mid * sl_inner(&nx, &ny)
}

pub fn characteristic_oracle(cd: &CauchyData1D, grid: &Grid2) -> Result<GridField<SlVec>> {
    let (axis, ox, oy) = diagonal_axis(grid)?;
    let n = axis.len;
    if n < 3 {
        return Err(Error::GridTooSmall { need: 3, got: n });
    }
    let (dlo, dhi) = cd.source().domain();
    if axis.start < dlo - 1e-12 || axis.end() > dhi + 1e-12 {
        return Err(Error::InvalidParameter("domain leaves the data interval".into()));
    }
    let h = axis.step;
    let idx = |i: usize, j: usize| j * n + i;
    let mut v = vec![SlVec::zero(); n * n];
    let diag: Vec<_> = axis.coords().iter().map(|t| cd.sample(*t)).collect();
    for k in 0..n {
        v[idx(k, k)] = diag[k].n0;
    }
    // first off-diagonal layers from the data
    for k in 0..n - 1 {
        let (lo, hi) = (axis.coord(k), axis.coord(k + 1));
        let mid = cd.sample(0.5 * (lo + hi));
        let src = mid.n0 * (0.5 * h * h * mid.nondegeneracy());
        let int_n1 = (diag[k].n1 + mid.n1 * 4.0 + diag[k + 1].n1) * (h / 6.0);
        let int_ny = (diag[k].nu_y() + mid.nu_y() * 4.0 + diag[k + 1].nu_y()) * (h / 6.0);
        // x = t_{k+1}, y = t_k
        v[idx(k + 1, k)] = to_h2(diag[k].n0 + int_n1 - src);
        // x = t_k, y = t_{k+1}
        v[idx(k, k + 1)] = to_h2(diag[k].n0 + int_ny - src);
    }
    for d in 2..n {
        for i in d..n {
            // below the diagonal: P = (i, j), A = (i, j+1), B = (i-1, j), C = (i-1, j+1)
            let j = i - d;
            let (a, b, c) = (v[idx(i, j + 1)], v[idx(i - 1, j)], v[idx(i - 1, j + 1)]);
            v[idx(i, j)] = march(a, b, c, h, |p| cell_source(b, p, c, a, h));
            // above the diagonal, mirrored: P = (j, i), A = (j+1, i), B = (j, i-1), C = (j+1, i-1)
            let (a, b, c) = (v[idx(j + 1, i)], v[idx(j, i - 1)], v[idx(j + 1, i - 1)]);
            v[idx(j, i)] = march(a, b, c, h, |p| cell_source(b, c, p, a, h));
        }
    }
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            out.push(v[idx(ox + i, oy + j)]);
        }
    }
    Ok(GridField::new(*grid, out))
}

fn march(a: SlVec, b: SlVec, c: SlVec, h: f64, source: impl Fn(SlVec) -> SlVec) -> SlVec {
    let base = a + b - c;
    let mut p = base;
    for _ in 0..2 {
        p = base - source(p) * (h * h);
    }
    to_h2(p)
}

/// max over interior nodes of ||[nu, nu_xy]|| with centred differences.
pub fn harmonicity_residual(nu: &GridField<SlVec>) -> Result<f64> {
    let g = &nu.grid;
    g.require(3)?;
    let s = 1.0 / (4.0 * g.x.step * g.y.step);
    let mut r: f64 = 0.0;
    for (i, j) in g.interior(1) {
        let nxy = (nu.at(i + 1, j + 1) - nu.at(i + 1, j - 1) - nu.at(i - 1, j + 1) + nu.at(i - 1, j - 1)) * s;
        r = r.max(bracket(&nu.at(i, j), &nxy).norm());
    }
    Ok(r)
}
