//! File formats: grid CSV, curve CSV, OBJ meshes, and the projection of
//! AdS3 to R^3 used for figures.

use std::io::{Read, Write};

use crate::algebra::{Mat2, SlVec};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid2};
use crate::surfaces::{Causal, SurfaceField, SurfaceGeometry};

pub const GRID_HEADER: [&str; 13] =
    ["x", "y", "nu11", "nu12", "nu21", "nu22", "f11", "f12", "f21", "f22", "Kp1", "H", "causal"];
pub const CURVE_HEADER: [&str; 9] = ["t", "f11", "f12", "f21", "f22", "nu11", "nu12", "nu21", "nu22"];
/// Smallest accepted number of curve samples.
pub const MIN_CURVE_SAMPLES: usize = 9;

/// Basis coordinates (x1, x2, x3); the e0 coordinate is dropped.
pub fn project_r3(m: &Mat2) -> [f64; 3] {
    project_r3_dropping(m, 0)
}

/// Basis coordinates with coordinate `drop` (0..=3) removed.
pub fn project_r3_dropping(m: &Mat2, drop: usize) -> [f64; 3] {
    let x = m.to_basis();
    let mut out = [0.0; 3];
    let mut k = 0;
    for (i, v) in x.iter().enumerate() {
        if i != drop {
            out[k] = *v;
            k += 1;
        }
    }
    out
}

/// Shortest decimal with 17 significant digits; non-finite values as "nan".
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn parse_num(s: &str) -> Result<f64> {
    match s.trim() {
        "nan" | "NaN" => Ok(f64::NAN),
        t => t.parse::<f64>().map_err(|e| Error::Parse(format!("'{t}': {e}"))),
    }
}

/// Node data in grid-CSV form; absent values are NaN / None.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridTable {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub nu: Vec<Mat2>,
    pub f: Vec<Mat2>,
    pub k_plus_one: Vec<f64>,
    pub mean: Vec<f64>,
    pub causal: Vec<Option<Causal>>,
}

impl GridTable {
    /// Table for `grid` with every value missing.
    pub fn empty_for(grid: &Grid2) -> Self {
        let n = grid.len();
        GridTable {
            x: grid.x.coords(),
            y: grid.y.coords(),
            nu: vec![Mat2::scalar(f64::NAN); n],
            f: vec![Mat2::scalar(f64::NAN); n],
            k_plus_one: vec![f64::NAN; n],
            mean: vec![f64::NAN; n],
            causal: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.x.len() * self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn with_nu(mut self, nu: &[SlVec]) -> Self {
        self.nu = nu.iter().map(|v| v.to_mat()).collect();
        self
    }

    pub fn with_surface(mut self, sf: &SurfaceField) -> Self {
        self.f = sf.f.clone();
        self
    }

    pub fn with_geometry(mut self, geo: &SurfaceGeometry) -> Self {
        self.k_plus_one = geo.k_plus_one.clone();
        self.mean = geo.mean.clone();
        self.causal = geo.causal.iter().map(|c| Some(*c)).collect();
        self
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(GRID_HEADER)?;
        let nx = self.x.len();
        for (j, y) in self.y.iter().enumerate() {
            for (i, x) in self.x.iter().enumerate() {
                let k = j * nx + i;
                let mut rec = vec![fmt_num(*x), fmt_num(*y)];
                rec.extend(self.nu[k].entries().iter().map(|v| fmt_num(*v)));
                rec.extend(self.f[k].entries().iter().map(|v| fmt_num(*v)));
                rec.push(fmt_num(self.k_plus_one[k]));
                rec.push(fmt_num(self.mean[k]));
                rec.push(self.causal[k].map_or("nan".to_string(), |c| c.label().to_string()));
                out.write_record(&rec)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid2> {
        Ok(Grid2::new(axis_from_samples(&self.x)?, axis_from_samples(&self.y)?))
    }

    /// Surface with normal f nu; every node needs finite f and nu.
    pub fn surface(&self) -> Result<SurfaceField> {
        let grid = self.grid()?;
        if let Some(k) = (0..self.len()).find(|k| !self.f[*k].is_finite() || !self.nu[*k].is_finite()) {
            return Err(Error::Parse(format!("row {} has no surface point or Gauss map", k + 2)));
        }
        let nu: Vec<SlVec> = self.nu.iter().map(|m| m.sl_part()).collect();
        Ok(SurfaceField::with_gauss_map(grid, self.f.clone(), &nu))
    }

    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(r);
        let header: Vec<String> = rdr.headers()?.iter().map(|s| s.to_string()).collect();
        if header != GRID_HEADER {
            return Err(Error::Parse(format!("unexpected grid header {header:?}")));
        }
        let mut t = GridTable::default();
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != GRID_HEADER.len() {
                return Err(Error::Parse(format!("row has {} fields", rec.len())));
            }
            let v: Vec<f64> = (0..12).map(|k| parse_num(&rec[k])).collect::<Result<_>>()?;
            points.push((v[0], v[1]));
            t.nu.push(Mat2::from_entries([v[2], v[3], v[4], v[5]]));
            t.f.push(Mat2::from_entries([v[6], v[7], v[8], v[9]]));
            t.k_plus_one.push(v[10]);
            t.mean.push(v[11]);
            t.causal.push(match &rec[12] {
                "nan" => None,
                s => Some(Causal::parse(s).ok_or_else(|| Error::Parse(format!("causal flag '{s}'")))?),
            });
        }
        // rows run over x fastest, then y
        let nx = points.iter().take_while(|p| p.1.to_bits() == points[0].1.to_bits()).count();
        if nx == 0 {
            return Ok(t);
        }
        if points.len() % nx != 0 {
            return Err(Error::Parse("rows do not form a rectangular grid".into()));
        }
        t.x = points[..nx].iter().map(|p| p.0).collect();
        t.y = points.iter().step_by(nx).map(|p| p.1).collect();
        for (k, p) in points.iter().enumerate() {
            if p.0.to_bits() != t.x[k % nx].to_bits() || p.1.to_bits() != t.y[k / nx].to_bits() {
                return Err(Error::Parse(format!("row {} is out of grid order", k + 2)));
            }
        }
        Ok(t)
    }
}

/// Uniform axis through sampled coordinates.
pub fn axis_from_samples(t: &[f64]) -> Result<Axis> {
    if t.len() < 2 {
        return Err(Error::GridTooSmall { need: 2, got: t.len() });
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    for (k, v) in t.iter().enumerate() {
        if (v - (t[0] + k as f64 * h)).abs() > 1e-9 * h.abs().max(1e-300) {
            return Err(Error::Parse(format!("samples are not uniformly spaced near t = {v}")));
        }
    }
    Axis::new(t[0], h, t.len())
}

/// Curve samples (t, f, nu) as read from the curve CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub t: Vec<f64>,
    pub f: Vec<Mat2>,
    pub nu: Vec<Mat2>,
}

impl CurveTable {
    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(r);
        let header: Vec<String> = rdr.headers()?.iter().map(|s| s.to_string()).collect();
        if header != CURVE_HEADER {
            return Err(Error::Parse(format!("unexpected curve header {header:?}")));
        }
        let mut c = CurveTable { t: Vec::new(), f: Vec::new(), nu: Vec::new() };
        for rec in rdr.records() {
            let rec = rec?;
            let v: Vec<f64> = rec.iter().map(parse_num).collect::<Result<_>>()?;
            if v.len() != 9 {
                return Err(Error::Parse(format!("row has {} fields", v.len())));
            }
            c.t.push(v[0]);
            c.f.push(Mat2::from_entries([v[1], v[2], v[3], v[4]]));
            c.nu.push(Mat2::from_entries([v[5], v[6], v[7], v[8]]));
        }
        if c.t.len() < MIN_CURVE_SAMPLES {
            return Err(Error::GridTooSmall { need: MIN_CURVE_SAMPLES, got: c.t.len() });
        }
        Ok(c)
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(CURVE_HEADER)?;
        for k in 0..self.t.len() {
            let mut rec = vec![fmt_num(self.t[k])];
            rec.extend(self.f[k].entries().iter().map(|v| fmt_num(*v)));
            rec.extend(self.nu[k].entries().iter().map(|v| fmt_num(*v)));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn axis(&self) -> Result<Axis> {
        axis_from_samples(&self.t)
    }

    /// nu as sl(2) vectors; fails on matrices with a trace.
    pub fn nu_vectors(&self) -> Result<Vec<SlVec>> {
        self.nu
            .iter()
            .map(|m| {
                if m.trace().abs() > 1e-9 * m.norm().max(1.0) {
                    Err(Error::Parse("nu samples must be trace free".into()))
                } else {
                    Ok(m.sl_part())
                }
            })
            .collect()
    }
}

/// Polygon mesh in OBJ form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjMesh {
    pub vertices: Vec<[f64; 3]>,
    /// 0-based vertex indices.
    pub faces: Vec<[usize; 4]>,
    pub lines: Vec<Vec<usize>>,
    pub comments: Vec<String>,
}

impl ObjMesh {
    /// Mesh of a surface over its grid. `mask[k]` = false drops node k and
    /// every face touching it. Polylines: the diagonal x = y when sampled,
    /// and the edges bordering dropped faces.
    pub fn from_surface(sf: &SurfaceField, mask: Option<&[bool]>, drop: usize) -> Result<Self> {
        let g = sf.grid;
        if g.nx() < 2 || g.ny() < 2 {
            return Err(Error::GridTooSmall { need: 2, got: g.nx().min(g.ny()) });
        }
        let keep = |k: usize| mask.map_or(true, |m| m[k]) && sf.f[k].is_finite();
        let mut id = vec![usize::MAX; g.len()];
        let mut mesh = ObjMesh { comments: vec![format!("projection: basis coordinates without x{drop}")], ..Default::default() };
        for k in 0..g.len() {
            if keep(k) {
                id[k] = mesh.vertices.len();
                mesh.vertices.push(project_r3_dropping(&sf.f[k], drop));
            }
        }
        let face_ok = |i: usize, j: usize| {
            [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)].iter().all(|&(a, b)| id[g.index(a, b)] != usize::MAX)
        };
        for j in 0..g.ny() - 1 {
            for i in 0..g.nx() - 1 {
                if face_ok(i, j) {
                    mesh.faces.push([id[g.index(i, j)], id[g.index(i + 1, j)], id[g.index(i + 1, j + 1)], id[g.index(i, j + 1)]]);
                }
            }
        }
        // diagonal polyline, split at dropped nodes
        let mut run = Vec::new();
        for i in 0..g.nx() {
            let x = g.x.coord(i);
            let j = g.y.nearest(x);
            let on = (g.y.coord(j) - x).abs() <= 1e-9 * g.x.step;
            if on && id[g.index(i, j)] != usize::MAX {
                run.push(id[g.index(i, j)]);
            } else {
                if run.len() > 1 {
                    mesh.lines.push(std::mem::take(&mut run));
                }
                run.clear();
            }
        }
        if run.len() > 1 {
            mesh.lines.push(run);
        }
        // edges between a kept and a dropped face
        let has_face = |i: i64, j: i64| {
            i >= 0 && j >= 0 && (i as usize) < g.nx() - 1 && (j as usize) < g.ny() - 1 && face_ok(i as usize, j as usize)
        };
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let (ii, jj) = (i as i64, j as i64);
                if i + 1 < g.nx() && has_face(ii, jj) != has_face(ii, jj - 1) {
                    let (a, b) = (id[g.index(i, j)], id[g.index(i + 1, j)]);
                    if a != usize::MAX && b != usize::MAX && mask.is_some() {
                        mesh.lines.push(vec![a, b]);
                    }
                }
                if j + 1 < g.ny() && has_face(ii, jj) != has_face(ii - 1, jj) {
                    let (a, b) = (id[g.index(i, j)], id[g.index(i, j + 1)]);
                    if a != usize::MAX && b != usize::MAX && mask.is_some() {
                        mesh.lines.push(vec![a, b]);
                    }
                }
            }
        }
        Ok(mesh)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", fmt_num(v[0]), fmt_num(v[1]), fmt_num(v[2]))?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        for l in &self.lines {
            let ids: Vec<String> = l.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(w, "l {}", ids.join(" "))?;
        }
        Ok(())
    }

    pub fn to_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = ObjMesh::default();
        let index = |s: &str| -> Result<usize> {
            let i: usize = s.parse().map_err(|_| Error::Parse(format!("bad index '{s}'")))?;
            i.checked_sub(1).ok_or_else(|| Error::Parse("OBJ indices are 1-based".into()))
        };
        for line in text.lines() {
            let mut it = line.split_whitespace();
            match it.next() {
                Some("#") => m.comments.push(line[2.min(line.len())..].to_string()),
                Some("v") => {
                    let v: Vec<f64> = it.map(parse_num).collect::<Result<_>>()?;
                    if v.len() != 3 {
                        return Err(Error::Parse(format!("vertex line '{line}'")));
                    }
                    m.vertices.push([v[0], v[1], v[2]]);
                }
                Some("f") => {
                    let v: Vec<usize> = it.map(index).collect::<Result<_>>()?;
                    if v.len() != 4 {
                        return Err(Error::Parse(format!("face line '{line}'")));
                    }
                    m.faces.push([v[0], v[1], v[2], v[3]]);
                }
                Some("l") => m.lines.push(it.map(index).collect::<Result<_>>()?),
                None => {}
                Some(other) => return Err(Error::Parse(format!("unsupported OBJ record '{other}'"))),
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_values() {
        assert_eq!(project_r3(&Mat2::identity()), [0.0, 0.0, 0.0]);
        assert_eq!(project_r3(&crate::algebra::E1), [1.0, 0.0, 0.0]);
        assert_eq!(project_r3(&Mat2::new(1.0, 2.0, 3.0, 4.0)), [0.5, 2.5, 1.5]);
    }

    #[test]
    fn empty_grid_writes_header_only() {
        let t = GridTable::default();
        assert_eq!(t.to_string().unwrap(), format!("{}\n", GRID_HEADER.join(",")));
        assert_eq!(GridTable::read(t.to_string().unwrap().as_bytes()).unwrap(), t);
    }

    #[test]
    fn two_by_two_mesh() {
        let g = Grid2::square(0.0, 0.1, 0.1).unwrap();
        let f = vec![Mat2::identity(), crate::algebra::E0 * 2.0, Mat2::new(1.0, 2.0, 3.0, 4.0), Mat2::identity()];
        let sf = SurfaceField { grid: g, f, normal: vec![Mat2::zero(); 4] };
        let m = ObjMesh::from_surface(&sf, None, 0).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (4, 1));
        assert_eq!(m.lines, vec![vec![0, 3]]);
        let text = m.to_string().unwrap();
        assert!(text.contains("\nf 1 2 4 3\n"));
        assert_eq!(ObjMesh::parse(&text).unwrap(), m);
        let dropped = ObjMesh::from_surface(&sf, Some(&[true, true, false, true]), 0).unwrap();
        assert_eq!((dropped.vertices.len(), dropped.faces.len()), (3, 0));
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0, -0.0] {
            assert_eq!(parse_num(&fmt_num(v)).unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_num(f64::NAN), "nan");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::algebra::sl_inner;
    use proptest::prelude::*;

    fn mat() -> impl Strategy<Value = Mat2> {
        proptest::array::uniform4(-3.0..3.0f64).prop_map(Mat2::from_entries)
    }

    proptest! {
        #[test]
        fn projection_is_linear(a in mat(), b in mat(), s in -2.0..2.0f64) {
            let p = project_r3(&(a + b * s));
            let (pa, pb) = (project_r3(&a), project_r3(&b));
            for k in 0..3 {
                prop_assert!((p[k] - (pa[k] + s * pb[k])).abs() <= 1e-12);
            }
        }

        #[test]
        fn projection_carries_the_metric(a in mat()) {
            let v = a.sl_part();
            let p = project_r3(&v.to_mat());
            prop_assert!((sl_inner(&v, &v) - (-p[0] * p[0] + p[1] * p[1] + p[2] * p[2])).abs() <= 1e-12);
        }

        #[test]
        fn numbers_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(parse_num(&fmt_num(v)).unwrap().to_bits(), v.to_bits());
        }
    }
}
