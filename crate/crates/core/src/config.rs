//! Run configuration: a TOML file with [domain], [params] and [output]
//! sections, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::presets;

/// Environment variable holding a global tolerance override.
pub const TOL_ENV: &str = "ADSLF_TOL";

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub x: Option<[f64; 2]>,
    pub y: Option<[f64; 2]>,
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub preset: Option<String>,
    /// Curve CSV (t, f, nu samples).
    pub curve: Option<PathBuf>,
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub theta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// Number of negative loop coefficients in the factorisation.
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub allow_singular: Option<bool>,
    /// Modules run by the verification ledger.
    pub modules: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// Basis coordinate dropped by the R^3 projection (0..=3).
    pub drop: Option<usize>,
    /// Grid CSV consumed by `parallel apply` and `export`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        ConfigFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Values of `over` replace those of `self` where present.
    pub fn merged(mut self, over: &ConfigFile) -> Self {
        macro_rules! take {
            ($($s:ident . $f:ident),*) => { $( if over.$s.$f.is_some() { self.$s.$f = over.$s.$f.clone(); } )* };
        }
        take!(domain.x, domain.y, domain.step);
        take!(params.preset, params.curve, params.r, params.rho, params.theta, params.a, params.b);
        take!(params.order, params.tol, params.allow_singular, params.modules);
        take!(output.dir, output.drop, output.input);
        self
    }
}

/// Resolved settings with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub step: f64,
    pub preset: Option<String>,
    pub curve: Option<PathBuf>,
    pub r: f64,
    pub rho: Option<f64>,
    pub theta: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub order: usize,
    pub tol: Option<f64>,
    pub allow_singular: bool,
    pub modules: Option<Vec<String>>,
    pub out_dir: PathBuf,
    pub drop: usize,
    pub input: Option<PathBuf>,
}

pub const DEFAULT_RANGE: [f64; 2] = [-0.9, 0.9];
pub const DEFAULT_STEP: f64 = 1e-2;

/// Tolerance from ADSLF_TOL, if set.
pub fn env_tolerance() -> Result<Option<f64>> {
    std::env::var(TOL_ENV).ok().map(|s| parse_tolerance(&s)).transpose()
}

pub fn parse_tolerance(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| *v > 0.0 && v.is_finite())
        .ok_or_else(|| Error::Parse(format!("{TOL_ENV}='{s}' is not a positive number")))
}

impl RunConfig {
    /// Apply defaults; a tolerance in ADSLF_TOL replaces the file value.
    pub fn resolve(file: &ConfigFile) -> Result<Self> {
        let c = RunConfig {
            x: file.domain.x.unwrap_or(DEFAULT_RANGE),
            y: file.domain.y.unwrap_or(DEFAULT_RANGE),
            step: file.domain.step.unwrap_or(DEFAULT_STEP),
            preset: file.params.preset.clone(),
            curve: file.params.curve.clone(),
            r: file.params.r.unwrap_or(2.0),
            rho: file.params.rho,
            theta: file.params.theta.unwrap_or(0.6),
            a: file.params.a,
            b: file.params.b,
            order: file.params.order.unwrap_or(20),
            tol: env_tolerance()?.or(file.params.tol),
            allow_singular: file.params.allow_singular.unwrap_or(false),
            modules: file.params.modules.clone(),
            out_dir: file.output.dir.clone().unwrap_or_else(|| PathBuf::from("out")),
            drop: file.output.drop.unwrap_or(0),
            input: file.output.input.clone(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidParameter(format!("step h = {} must be positive", self.step)));
        }
        for r in [self.x, self.y] {
            if !(r[0] < r[1]) {
                return Err(Error::InvalidParameter(format!("range [{}, {}] is empty", r[0], r[1])));
            }
        }
        if self.drop > 3 {
            return Err(Error::InvalidParameter("projection drops one of the coordinates 0..=3".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter(format!("tolerance {t} must be positive")));
            }
        }
        if !self.allow_singular {
            if let Some(p) = &self.preset {
                if let Some(why) = presets::singular_set_hit(p, self.x, self.y) {
                    return Err(Error::InvalidParameter(format!("{why}; pass --allow-singular to proceed")));
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid2> {
        Grid2::rect((self.x[0], self.x[1]), (self.y[0], self.y[1]), self.step)
    }

    pub fn preset_name(&self) -> Result<&str> {
        self.preset.as_deref().ok_or_else(|| Error::InvalidParameter("no preset or input given".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_merge() {
        let f = ConfigFile::parse("[domain]\nx = [-0.5, 0.5]\nstep = 0.02\n[params]\npreset = \"example-4.2\"\n[output]\ndir = \"o\"\n").unwrap();
        let over = ConfigFile { domain: DomainSection { step: Some(0.01), ..Default::default() }, ..Default::default() };
        let m = f.merged(&over);
        assert_eq!(m.domain.step, Some(0.01));
        assert_eq!(m.domain.x, Some([-0.5, 0.5]));
        let rc = RunConfig::resolve(&m).unwrap();
        assert_eq!(rc.y, DEFAULT_RANGE);
        assert_eq!(rc.out_dir, PathBuf::from("o"));
        assert!(ConfigFile::parse("[domain]\nbogus = 1\n").is_err());
    }

    #[test]
    fn singular_ranges_need_the_flag() {
        let mut f = ConfigFile::default();
        f.params.preset = Some("example-4.2".into());
        f.domain.x = Some([-1.2, 0.5]);
        assert!(matches!(RunConfig::resolve(&f), Err(Error::InvalidParameter(_))));
        f.params.allow_singular = Some(true);
        assert!(RunConfig::resolve(&f).is_ok());
        f.domain.step = Some(0.0);
        assert!(RunConfig::resolve(&f).is_err());
    }

    #[test]
    fn tolerance_values() {
        assert_eq!(parse_tolerance(" 1e-15 ").unwrap(), 1e-15);
        assert!(parse_tolerance("0").is_err());
        assert!(parse_tolerance("-1").is_err());
        assert!(parse_tolerance("tight").is_err());
    }
}
