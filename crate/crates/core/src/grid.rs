//! Uniform axes, rectangular null-coordinate grids, sampled fields and
//! finite differences.

use std::ops::{Add, Mul, Sub};

use crate::algebra::{Mat2, SlVec};
use crate::error::{Error, Result};

/// Values that can be combined linearly by finite-difference stencils.
pub trait Linear: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl Linear for f64 {}
impl Linear for SlVec {}
impl Linear for Mat2 {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !step.is_finite() {
            return Err(Error::InvalidParameter(format!("axis step must be positive, got {step}")));
        }
        if len == 0 {
            return Err(Error::GridTooSmall { need: 1, got: 0 });
        }
        Ok(Axis { start, step, len })
    }

    /// Axis covering [lo, hi]; the span must be a whole number of steps.
    pub fn from_range(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(hi >= lo) {
            return Err(Error::InvalidParameter(format!("empty range [{lo}, {hi}]")));
        }
        let n = (hi - lo) / step;
        let k = n.round();
        if (n - k).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "range [{lo}, {hi}] is not a multiple of step {step}"
            )));
        }
        Axis::new(lo, step, k as usize + 1)
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn end(&self) -> f64 {
        self.coord(self.len - 1)
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.coord(i)).collect()
    }

    /// Index of the node nearest to t (clamped).
    pub fn nearest(&self, t: f64) -> usize {
        let k = ((t - self.start) / self.step).round();
        k.clamp(0.0, (self.len - 1) as f64) as usize
    }

    /// Signed lattice offset of `other` relative to this axis when both
    /// share the same step and lattice.
    pub fn lattice_offset(&self, other: &Axis) -> Option<i64> {
        if (self.step - other.step).abs() > 1e-12 * self.step {
            return None;
        }
        let k = (other.start - self.start) / self.step;
        let r = k.round();
        if (k - r).abs() > 1e-6 {
            return None;
        }
        Some(r as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    pub x: Axis,
    pub y: Axis,
}

impl Grid2 {
    pub fn new(x: Axis, y: Axis) -> Self {
        Grid2 { x, y }
    }

    /// Square grid [lo, hi]^2 with spacing h.
    pub fn square(lo: f64, hi: f64, h: f64) -> Result<Self> {
        let a = Axis::from_range(lo, hi, h)?;
        Ok(Grid2 { x: a, y: a })
    }

    pub fn rect(x: (f64, f64), y: (f64, f64), h: f64) -> Result<Self> {
        Ok(Grid2 { x: Axis::from_range(x.0, x.1, h)?, y: Axis::from_range(y.0, y.1, h)? })
    }

    pub fn nx(&self) -> usize {
        self.x.len
    }

    pub fn ny(&self) -> usize {
        self.y.len
    }

    pub fn len(&self) -> usize {
        self.x.len * self.y.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, rows indexed by y.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.x.len + i
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x.coord(i), self.y.coord(j))
    }

    pub fn require(&self, need: usize) -> Result<()> {
        let got = self.nx().min(self.ny());
        if got < need {
            return Err(Error::GridTooSmall { need, got });
        }
        Ok(())
    }

    /// Nodes that are at least `margin` away from every edge.
    pub fn interior(&self, margin: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (nx, ny) = (self.nx(), self.ny());
        (margin..ny.saturating_sub(margin)).flat_map(move |j| (margin..nx.saturating_sub(margin)).map(move |i| (i, j)))
    }
}

/// Values of a map sampled on a grid, with optional derivative caches.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    pub grid: Grid2,
    pub values: Vec<T>,
    pub dx: Option<Vec<T>>,
    pub dy: Option<Vec<T>>,
}

impl<T: Linear> GridField<T> {
    pub fn new(grid: Grid2, values: Vec<T>) -> Self {
        assert_eq!(values.len(), grid.len(), "field size does not match grid");
        GridField { grid, values, dx: None, dy: None }
    }

    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.point(i, j);
                values.push(f(x, y));
            }
        }
        GridField::new(grid, values)
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, j: usize) -> Vec<T> {
        (0..self.grid.nx()).map(|i| self.at(i, j)).collect()
    }

    pub fn column(&self, i: usize) -> Vec<T> {
        (0..self.grid.ny()).map(|j| self.at(i, j)).collect()
    }

    pub fn with_derivatives(mut self, dx: Vec<T>, dy: Vec<T>) -> Self {
        assert_eq!(dx.len(), self.values.len());
        assert_eq!(dy.len(), self.values.len());
        self.dx = Some(dx);
        self.dy = Some(dy);
        self
    }

    /// x-derivative: the cache when present, else 4th-order differences.
    pub fn deriv_x(&self) -> Vec<T> {
        match &self.dx {
            Some(d) => d.clone(),
            None => fd_x(&self.grid, &self.values, diff1_o4),
        }
    }

    pub fn deriv_y(&self) -> Vec<T> {
        match &self.dy {
            Some(d) => d.clone(),
            None => fd_y(&self.grid, &self.values, diff1_o4),
        }
    }

    /// Finite-difference derivatives ignoring any cache.
    pub fn fd_deriv_x(&self) -> Vec<T> {
        fd_x(&self.grid, &self.values, diff1_o4)
    }

    pub fn fd_deriv_y(&self) -> Vec<T> {
        fd_y(&self.grid, &self.values, diff1_o4)
    }

    pub fn map<U: Linear>(&self, f: impl Fn(&T) -> U) -> GridField<U> {
        GridField::new(self.grid, self.values.iter().map(f).collect())
    }
}

/// Apply a 1-D stencil along every row.
pub fn fd_x<T: Linear>(grid: &Grid2, v: &[T], d: fn(&[T], f64) -> Vec<T>) -> Vec<T> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = vec![T::default(); v.len()];
    for j in 0..ny {
        let row = &v[j * nx..(j + 1) * nx];
        let dr = d(row, grid.x.step);
        out[j * nx..(j + 1) * nx].copy_from_slice(&dr);
    }
    out
}

/// Apply a 1-D stencil along every column.
pub fn fd_y<T: Linear>(grid: &Grid2, v: &[T], d: fn(&[T], f64) -> Vec<T>) -> Vec<T> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = vec![T::default(); v.len()];
    let mut col = vec![T::default(); ny];
    for i in 0..nx {
        for j in 0..ny {
            col[j] = v[j * nx + i];
        }
        let dc = d(&col, grid.y.step);
        for j in 0..ny {
            out[j * nx + i] = dc[j];
        }
    }
    out
}

fn comb<T: Linear>(v: &[T], base: usize, w: &[f64]) -> T {
    let mut acc = T::default();
    for (k, c) in w.iter().enumerate() {
        if *c != 0.0 {
            acc = acc + v[base + k] * *c;
        }
    }
    acc
}

fn comb_rev<T: Linear>(v: &[T], last: usize, w: &[f64]) -> T {
    let mut acc = T::default();
    for (k, c) in w.iter().enumerate() {
        if *c != 0.0 {
            acc = acc + v[last - k] * *c;
        }
    }
    acc
}

/// First derivative, 4th order: centred inside, one-sided at the ends.
/// Falls back to 2nd order for fewer than 5 samples.
pub fn diff1_o4<T: Linear>(v: &[T], h: f64) -> Vec<T> {
    let n = v.len();
    if n < 5 {
        return diff1_o2(v, h);
    }
    let s = 1.0 / (12.0 * h);
    let edge0 = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let edge1 = [-3.0, -10.0, 18.0, -6.0, 1.0];
    let mut out = vec![T::default(); n];
    out[0] = comb(v, 0, &edge0) * s;
    out[1] = comb(v, 0, &edge1) * s;
    for i in 2..n - 2 {
        out[i] = (v[i - 2] - v[i + 2] + (v[i + 1] - v[i - 1]) * 8.0) * s;
    }
    out[n - 1] = comb_rev(v, n - 1, &edge0) * (-s);
    out[n - 2] = comb_rev(v, n - 1, &edge1) * (-s);
    out
}

/// First derivative, 2nd order: centred inside, one-sided at the ends.
pub fn diff1_o2<T: Linear>(v: &[T], h: f64) -> Vec<T> {
    let n = v.len();
    let mut out = vec![T::default(); n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        let d = (v[1] - v[0]) * (1.0 / h);
        return vec![d, d];
    }
    let s = 1.0 / (2.0 * h);
    out[0] = (v[0] * -3.0 + v[1] * 4.0 - v[2]) * s;
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) * s;
    }
    out[n - 1] = (v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) * s;
    out
}

/// Second derivative, 4th order: centred inside, one-sided at the ends.
pub fn diff2_o4<T: Linear>(v: &[T], h: f64) -> Vec<T> {
    let n = v.len();
    let mut out = vec![T::default(); n];
    if n < 6 {
        if n >= 3 {
            let s = 1.0 / (h * h);
            for i in 1..n - 1 {
                out[i] = (v[i + 1] - v[i] * 2.0 + v[i - 1]) * s;
            }
            out[0] = out[1];
            out[n - 1] = out[n - 2];
        }
        return out;
    }
    let s = 1.0 / (12.0 * h * h);
    let edge0 = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    let edge1 = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    out[0] = comb(v, 0, &edge0) * s;
    out[1] = comb(v, 0, &edge1) * s;
    for i in 2..n - 2 {
        out[i] = ((v[i + 1] + v[i - 1]) * 16.0 - (v[i + 2] + v[i - 2]) - v[i] * 30.0) * s;
    }
    out[n - 1] = comb_rev(v, n - 1, &edge0) * s;
    out[n - 2] = comb_rev(v, n - 1, &edge1) * s;
    out
}

/// Observed convergence order from errors at successively halved steps.
pub fn observed_order(e_coarse: f64, e_fine: f64, ratio: f64) -> f64 {
    (e_coarse / e_fine).ln() / ratio.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_from_range() {
        let a = Axis::from_range(-0.9, 0.9, 0.1).unwrap();
        assert_eq!(a.len, 19);
        assert!((a.end() - 0.9).abs() < 1e-14);
        assert_eq!(a.nearest(0.0), 9);
        assert!(Axis::from_range(0.0, 1.0, 0.3).is_err());
        assert!(Axis::new(0.0, -1.0, 3).is_err());
        let b = Axis::from_range(-0.5, 0.5, 0.1).unwrap();
        assert_eq!(a.lattice_offset(&b), Some(4));
    }

    #[test]
    fn first_derivative_is_fourth_order() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| (1.3 * i as f64 * h).sin()).collect();
            diff1_o4(&v, h)
                .iter()
                .enumerate()
                .map(|(i, d)| (d - 1.3 * (1.3 * i as f64 * h).cos()).abs())
                .fold(0.0, f64::max)
        };
        let p = observed_order(err(21), err(41), 2.0);
        assert!(p > 3.7, "order {p}");
    }

    #[test]
    fn second_derivative_is_fourth_order() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| (1.3 * i as f64 * h).exp()).collect();
            diff2_o4(&v, h)
                .iter()
                .enumerate()
                .map(|(i, d)| (d - 1.69 * (1.3 * i as f64 * h).exp()).abs())
                .fold(0.0, f64::max)
        };
        let p = observed_order(err(21), err(41), 2.0);
        assert!(p > 3.5, "order {p}");
    }

    #[test]
    fn polynomials_are_exact() {
        let h = 0.1;
        let v: Vec<f64> = (0..8).map(|i| (i as f64 * h).powi(3)).collect();
        for (i, d) in diff1_o4(&v, h).iter().enumerate() {
            let x = i as f64 * h;
            assert!((d - 3.0 * x * x).abs() < 1e-12);
        }
        for (i, d) in diff2_o4(&v, h).iter().enumerate() {
            assert!((d - 6.0 * i as f64 * h).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_field_derivatives() {
        let g = Grid2::square(0.0, 1.0, 0.05).unwrap();
        let f = GridField::from_fn(g, |x, y| x * x * y + y.powi(3));
        let dx = f.deriv_x();
        let dy = f.deriv_y();
        for (i, j) in g.interior(0) {
            let (x, y) = g.point(i, j);
            assert!((dx[g.index(i, j)] - 2.0 * x * y).abs() < 1e-11);
            assert!((dy[g.index(i, j)] - (x * x + 3.0 * y * y)).abs() < 1e-11);
        }
    }
}
