//! Command-line front end. The binary only forwards to [`run`].

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::{sl_inner, Mat2};
use crate::config::{ConfigFile, DomainSection, OutputSection, ParamsSection, RunConfig};
use crate::error::{Error, Result};
use crate::gcp::{self, GeometricCauchyData};
use crate::grid::{Axis, Grid2};
use crate::harmonic::{abc_from_data, dalembert_solve_with, DalembertOptions, HarmonicSolution};
use crate::io::{CurveTable, GridTable, ObjMesh};
use crate::parallel;
use crate::presets;
use crate::surfaces::{self, SurfaceField};
use crate::verify::{self, Module, Status, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "adslf", version, about = "Harmonic maps into H^2 and constant-curvature surfaces in AdS3")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command; they override the config file.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// TOML file with [domain], [params] and [output] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named data set: example-3.3, example-4.2, example-5.7, example-6.2 or gcp-demo.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Grid step h.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub step: Option<f64>,
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    /// Domain interval in x (the u coordinate).
    pub x: Option<Vec<f64>>,
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub y: Option<Vec<f64>>,
    /// Case 1 ratio r (r != 0, r^2 != 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Curve parameter rho of the geometric Cauchy problem (rho^2 != 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Parallel distance; for surface case2 the Case 2 angle.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Loop truncation order N.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Curve CSV (t,f11,..,nu22) for the geometric Cauchy problem.
    #[arg(long, global = true)]
    pub curve: Option<PathBuf>,
    /// Grid CSV to read (parallel apply, export).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output directory (default: out).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Basis coordinate left out of the R^3 projection (0..=3).
    #[arg(long, global = true)]
    pub drop: Option<usize>,
    /// Run even if the domain meets a declared singular set.
    #[arg(long, global = true)]
    pub allow_singular: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lorentz harmonic maps from Cauchy data.
    Harmonic {
        #[command(subcommand)]
        action: HarmonicCmd,
    },
    /// Constant-curvature surfaces from a harmonic Gauss map.
    Surface {
        #[command(subcommand)]
        action: SurfaceCmd,
    },
    /// Geometric Cauchy problem: surface through a curve with given Gauss map.
    Gcp {
        #[command(subcommand)]
        action: GcpCmd,
    },
    /// Parallel surfaces.
    Parallel {
        #[command(subcommand)]
        action: ParallelCmd,
    },
    /// Verification ledger.
    Verify {
        #[command(subcommand)]
        action: VerifyCmd,
    },
    /// Grid CSV to OBJ.
    Export,
}

#[derive(Debug, Subcommand)]
pub enum HarmonicCmd {
    Solve,
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCmd {
    /// Immersive Gauss map, K + 1 = -(2r+1)^2.
    Case1,
    /// Gauss map depending on x only, K + 1 = -1 (example-5.7).
    Case2,
}

#[derive(Debug, Subcommand)]
pub enum GcpCmd {
    Solve,
}

#[derive(Debug, Subcommand)]
pub enum ParallelCmd {
    /// f cos(theta) + N sin(theta) of a grid CSV or a preset surface.
    Apply,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    All {
        /// Comma-separated module names, or "none".
        #[arg(long, value_delimiter = ',')]
        modules: Option<Vec<String>>,
    },
}

impl CommonArgs {
    fn overrides(&self) -> ConfigFile {
        let pair = |v: &Option<Vec<f64>>| v.as_ref().map(|v| [v[0], v[1]]);
        ConfigFile {
            domain: DomainSection { x: pair(&self.x), y: pair(&self.y), step: self.step },
            params: ParamsSection {
                preset: self.preset.clone(),
                curve: self.curve.clone(),
                r: self.r,
                rho: self.rho,
                theta: self.theta,
                a: self.a,
                b: self.b,
                order: self.order,
                tol: None,
                allow_singular: self.allow_singular.then_some(true),
                modules: None,
            },
            output: OutputSection { dir: self.out_dir.clone(), drop: self.drop, input: self.input.clone() },
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        RunConfig::resolve(&file.merged(&self.overrides()))
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let mut cfg = cli.common.resolve()?;
    if let Command::Verify { action: VerifyCmd::All { modules: Some(m) } } = &cli.command {
        cfg.modules = Some(m.clone());
    }
    let out = Output::new(&cfg.out_dir)?;
    match &cli.command {
        Command::Harmonic { action: HarmonicCmd::Solve } => harmonic_solve(&cfg, &out),
        Command::Surface { action: SurfaceCmd::Case1 } => surface_case1(&cfg, &out),
        Command::Surface { action: SurfaceCmd::Case2 } => surface_case2(&cfg, &out),
        Command::Gcp { action: GcpCmd::Solve } => gcp_solve(&cfg, &out),
        Command::Parallel { action: ParallelCmd::Apply } => parallel_apply(&cfg, &out),
        Command::Verify { action: VerifyCmd::All { .. } } => verify_all(&cfg, &out),
        Command::Export => export(&cfg, &out),
    }
}

struct Output {
    dir: PathBuf,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Output { dir: dir.to_path_buf() })
    }

    fn write(&self, name: &str, text: &str) -> Result<()> {
        let p = self.dir.join(name);
        fs::write(&p, text)?;
        println!("wrote {}", p.display());
        Ok(())
    }

    fn surface(&self, stem: &str, sf: &SurfaceField, nu: &[crate::algebra::SlVec], drop: usize) -> Result<()> {
        let geo = surfaces::fundamental_forms(sf)?;
        let table = GridTable::empty_for(&sf.grid).with_nu(nu).with_surface(sf).with_geometry(&geo);
        self.write(&format!("{stem}.csv"), &table.to_string()?)?;
        self.write(&format!("{stem}.obj"), &ObjMesh::from_surface(sf, None, drop)?.to_string()?)?;
        let st = surfaces::interior_stats(&sf.grid, &geo.k_plus_one, 2);
        println!("K+1 mean {:.10e} stddev {:.3e}", st.mean, st.stddev);
        let h = surfaces::interior_stats(&sf.grid, &geo.mean, 2);
        println!("H mean {:.10e} stddev {:.3e}", h.mean, h.stddev);
        Ok(())
    }
}

fn solve_preset(cfg: &RunConfig, default: &str) -> Result<(Grid2, HarmonicSolution)> {
    let name = cfg.preset.as_deref().unwrap_or(default);
    let grid = cfg.grid()?;
    // the Cauchy data live on the diagonal, which spans both ranges
    let lo = cfg.x[0].min(cfg.y[0]);
    let hi = cfg.x[1].max(cfg.y[1]);
    let n = ((hi - lo) / cfg.step).round() as usize + 1;
    let data = presets::cauchy_data(name, Axis::new(lo, cfg.step, n)?)?;
    let abc = abc_from_data(&data)?;
    let defaults = DalembertOptions::default();
    let opts = DalembertOptions {
        order: cfg.order,
        loop_degree: defaults.loop_degree.max(cfg.order as i32 + 12),
        ..defaults
    };
    Ok((grid, dalembert_solve_with(&abc, &grid, &opts)?))
}

fn harmonic_solve(cfg: &RunConfig, out: &Output) -> Result<i32> {
    let (grid, sol) = solve_preset(cfg, presets::EXAMPLE_4_2)?;
    let table = GridTable::empty_for(&grid).with_nu(&sol.nu.values);
    out.write("harmonic.csv", &table.to_string()?)?;
    let h2 = sol.nu.values.iter().map(|v| (sl_inner(v, v) + 1.0).abs()).fold(0.0, f64::max);
    println!("H^2 defect {h2:.3e}");
    println!("harmonicity residual {:.3e}", crate::harmonic::harmonicity_residual(&sol.nu)?);
    Ok(0)
}

fn surface_case1(cfg: &RunConfig, out: &Output) -> Result<i32> {
    let (grid, sol) = solve_preset(cfg, presets::GCP_DEMO)?;
    let base = surfaces::base_node(&grid, 0.0, 0.0);
    let sf = surfaces::reconstruct_case1(&sol.nu, cfg.r, Mat2::identity(), base)?;
    out.surface("case1", &sf, &sol.nu.values, cfg.drop)?;
    println!("expected K+1 {:.10e}", -(2.0 * cfg.r + 1.0).powi(2));
    Ok(0)
}

fn case2_surface(cfg: &RunConfig, theta: f64) -> Result<(SurfaceField, Vec<crate::algebra::SlVec>)> {
    let grid = cfg.grid()?;
    let (a0, b0) = presets::example_5_7_coefficients(theta);
    let (a, b) = (cfg.a.unwrap_or(a0), cfg.b.unwrap_or(b0));
    let nu = presets::example_5_7_nu(grid);
    let omega = surfaces::solve_omega(&presets::example_5_7_frames(grid), a, b);
    let base = surfaces::base_node(&grid, 0.0, 0.0);
    let sf = surfaces::reconstruct_case2(&nu, &omega, surfaces::case2_initial(theta), base)?;
    Ok((sf, nu.values))
}

fn surface_case2(cfg: &RunConfig, out: &Output) -> Result<i32> {
    if let Some(p) = cfg.preset.as_deref() {
        if p != presets::EXAMPLE_5_7 {
            return Err(Error::InvalidParameter(format!("case2 is available for {} only, not '{p}'", presets::EXAMPLE_5_7)));
        }
    }
    let (sf, nu) = case2_surface(cfg, cfg.theta)?;
    out.surface("case2", &sf, &nu, cfg.drop)
        .map(|_| 0)
}

fn gcp_data(cfg: &RunConfig) -> Result<GeometricCauchyData> {
    if let Some(path) = &cfg.curve {
        let table = CurveTable::read(fs::File::open(path)?)?;
        let rho = cfg.rho.ok_or_else(|| Error::InvalidParameter("tabulated curve data need --rho".into()))?;
        return GeometricCauchyData::tabulated(table.axis()?, table.f.clone(), table.nu_vectors()?, rho);
    }
    let name = cfg.preset.as_deref().unwrap_or(presets::GCP_DEMO);
    let data = gcp::preset(name, Some(cfg.r))?;
    match cfg.rho {
        Some(rho) if name == presets::GCP_DEMO => GeometricCauchyData::new(data.source(), data.axis, rho, data.provenance.clone()),
        Some(_) => Err(Error::InvalidParameter(format!("rho of {name} is fixed by r"))),
        None => Ok(data),
    }
}

fn gcp_solve(cfg: &RunConfig, out: &Output) -> Result<i32> {
    let data = gcp_data(cfg)?;
    let sol = gcp::gcp_solve(&data, &cfg.grid()?)?;
    out.surface("gcp", &sol.surface, &sol.harmonic.nu.values, cfg.drop)?;
    let rep = gcp::diagonal_report(&data, &sol);
    println!("rho {:.10e} expected K+1 {:.10e}", data.rho, -data.rho * data.rho);
    println!("diagonal curve defect {:.3e} Gauss map defect {:.3e}", rep.curve, rep.gauss_map);
    Ok(0)
}

fn parallel_apply(cfg: &RunConfig, out: &Output) -> Result<i32> {
    let sf = match &cfg.input {
        Some(p) => GridTable::read(fs::File::open(p)?)?.surface()?,
        None => match cfg.preset.as_deref().unwrap_or(presets::EXAMPLE_5_7) {
            presets::EXAMPLE_5_7 => case2_surface(cfg, verify::CASE2_THETA)?.0,
            other => {
                let (grid, sol) = solve_preset(&RunConfig { preset: Some(other.into()), ..cfg.clone() }, other)?;
                surfaces::reconstruct_case1(&sol.nu, cfg.r, Mat2::identity(), surfaces::base_node(&grid, 0.0, 0.0))?
            }
        },
    };
    let p = parallel::parallel_surface(&sf, cfg.theta)?;
    let geo = surfaces::fundamental_forms(&p.surface)?;
    let mut table = GridTable::empty_for(&sf.grid).with_surface(&p.surface).with_geometry(&geo);
    table.nu = p.surface.gauss_map().iter().map(|v| v.to_mat()).collect();
    for (k, ok) in p.mask.iter().enumerate() {
        if !ok {
            table.causal[k] = None;
        }
    }
    out.write("parallel.csv", &table.to_string()?)?;
    out.write("parallel.obj", &ObjMesh::from_surface(&p.surface, Some(&p.mask), cfg.drop)?.to_string()?)?;
    println!("theta {:.10e} regular nodes {} of {}", cfg.theta, p.regular_count(), p.mask.len());
    Ok(0)
}

fn verify_all(cfg: &RunConfig, out: &Output) -> Result<i32> {
    let modules = match &cfg.modules {
        None => Module::ALL.to_vec(),
        Some(names) => names
            .iter()
            .filter(|n| !n.is_empty() && n.as_str() != "none")
            .map(|n| Module::parse(n))
            .collect::<Result<Vec<_>>>()?,
    };
    let ledger = verify::run_verification(&VerifyOptions { modules, tol_override: cfg.tol })?;
    out.write("ledger.csv", &ledger.to_csv()?)?;
    let mut summary = String::new();
    for e in ledger.entries.iter().filter(|e| e.status == Status::PropertyFail) {
        let _ = writeln!(summary, "FAIL {} measured {:e} tolerance {:e} {}", e.id, e.measured, e.tolerance, e.note);
    }
    print!("{summary}");
    println!(
        "{} entries: {} property-pass, {} property-fail, {} match, {} mismatch",
        ledger.entries.len(),
        ledger.count(Status::PropertyPass),
        ledger.count(Status::PropertyFail),
        ledger.count(Status::Match),
        ledger.count(Status::Mismatch)
    );
    Ok(ledger.exit_code())
}

fn export(cfg: &RunConfig, out: &Output) -> Result<i32> {
    let path = cfg.input.as_ref().ok_or_else(|| Error::InvalidParameter("export needs --input grid.csv".into()))?;
    let table = GridTable::read(fs::File::open(path)?)?;
    let grid = table.grid()?;
    let nu: Vec<_> = table.nu.iter().map(|m| m.sl_part()).collect();
    let sf = SurfaceField::with_gauss_map(grid, table.f.clone(), &nu);
    let mask: Vec<bool> = sf.f.iter().map(|m| m.is_finite()).collect();
    let mask = mask.iter().any(|m| !m).then_some(mask);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("surface");
    out.write(&format!("{stem}.obj"), &ObjMesh::from_surface(&sf, mask.as_deref(), cfg.drop)?.to_string()?)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_in(dir: &Path, args: &[&str]) -> i32 {
        let mut v = vec!["adslf"];
        v.extend_from_slice(args);
        v.extend_from_slice(&["--out-dir", dir.to_str().unwrap()]);
        run(v)
    }

    const SMALL: [&str; 8] = ["--x", "-0.3", "0.3", "--y", "-0.3", "0.3", "--step", "0.05"];

    #[test]
    fn outputs_are_deterministic() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for d in [a.path(), b.path()] {
            let mut args = vec!["surface", "case2"];
            args.extend_from_slice(&SMALL);
            assert_eq!(run_in(d, &args), 0);
        }
        for f in ["case2.csv", "case2.obj"] {
            assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
        }
        let table = GridTable::read(fs::File::open(a.path().join("case2.csv")).unwrap()).unwrap();
        assert_eq!(table.len(), 13 * 13);
    }

    #[test]
    fn exit_codes() {
        let d = tempfile::tempdir().unwrap();
        assert_eq!(run_in(d.path(), &["no-such-command"]), 1);
        assert_eq!(run_in(d.path(), &["harmonic", "solve", "--step", "-1"]), 1);
        assert_eq!(run_in(d.path(), &["harmonic", "solve", "--preset", "nope"]), 1);
        assert_eq!(run_in(d.path(), &["harmonic", "solve", "--preset", "example-4.2", "--x", "-1.5", "1.5"]), 1);
        assert_eq!(run_in(d.path(), &["verify", "all", "--modules", "none"]), 2);
        assert_eq!(run_in(d.path(), &["verify", "all", "--modules", "algebra"]), 0);
        assert_eq!(run_in(d.path(), &["gcp", "solve", "--preset", "example-6.2"]), 3);
        let mut args = vec!["surface", "case1", "--preset", "example-4.2"];
        args.extend_from_slice(&SMALL);
        assert_eq!(run_in(d.path(), &args), 3);
    }

    #[test]
    fn config_file_and_flag_override() {
        let d = tempfile::tempdir().unwrap();
        let cfg = d.path().join("run.toml");
        fs::write(&cfg, "[domain]\nx = [-0.2, 0.2]\ny = [-0.2, 0.2]\nstep = 0.1\n[params]\ntheta = 0.6\n").unwrap();
        let code = run_in(d.path(), &["surface", "case2", "--config", cfg.to_str().unwrap(), "--step", "0.05"]);
        assert_eq!(code, 0);
        let table = GridTable::read(fs::File::open(d.path().join("case2.csv")).unwrap()).unwrap();
        assert_eq!((table.x.len(), table.y.len()), (9, 9));
    }

    #[test]
    fn parallel_and_export_read_grid_csv() {
        let d = tempfile::tempdir().unwrap();
        let mut args = vec!["surface", "case2"];
        args.extend_from_slice(&SMALL);
        assert_eq!(run_in(d.path(), &args), 0);
        let input = d.path().join("case2.csv");
        let inp = input.to_str().unwrap();
        assert_eq!(run_in(d.path(), &["parallel", "apply", "--input", inp, "--theta", "0.3"]), 0);
        let par = GridTable::read(fs::File::open(d.path().join("parallel.csv")).unwrap()).unwrap();
        assert!(par.f.iter().all(|m| (m.det() - 1.0).abs() < 1e-10));
        let out = d.path().join("parallel.csv");
        assert_eq!(run_in(d.path(), &["export", "--input", out.to_str().unwrap(), "--drop", "3"]), 0);
        let mesh = ObjMesh::parse(&fs::read_to_string(d.path().join("parallel.obj")).unwrap()).unwrap();
        assert_eq!(mesh.vertices.len(), 13 * 13);
        assert_eq!(mesh.faces.len(), 12 * 12);
    }

    #[test]
    fn tabulated_curve_needs_rho() {
        let d = tempfile::tempdir().unwrap();
        let axis = Axis::from_range(-0.5, 0.5, 0.05).unwrap();
        let table = CurveTable {
            t: axis.coords(),
            f: axis.coords().iter().map(|t| gcp::demo_curve(*t).f).collect(),
            nu: axis.coords().iter().map(|t| gcp::demo_curve(*t).nu.to_mat()).collect(),
        };
        let path = d.path().join("curve.csv");
        table.write(fs::File::create(&path).unwrap()).unwrap();
        let p = path.to_str().unwrap();
        let small = ["--x", "-0.3", "0.3", "--y", "-0.3", "0.3", "--step", "0.05"];
        let mut args = vec!["gcp", "solve", "--curve", p];
        args.extend_from_slice(&small);
        assert_eq!(run_in(d.path(), &args), 1);
        args.extend_from_slice(&["--rho", "5"]);
        assert_eq!(run_in(d.path(), &args), 0);
    }
}
