use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::banach_scale::{QuadratureConfig, DEFAULT_LAMBDA};
use crate::error::{Error, Result};
use crate::exp_volterra::Regime;
use crate::tikhonov::SolverOptions;

/// Regime name as written in configuration files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeKind {
    None,
    Hoelder,
    LowOrder,
}

impl std::str::FromStr for RegimeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "hoelder" => Ok(Self::Hoelder),
            "low-order" => Ok(Self::LowOrder),
            other => Err(Error::Usage(format!(
                "unknown regime '{other}' (expected none, hoelder or low-order)"
            ))),
        }
    }
}

/// Data perturbation used in rate studies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StudyNoise {
    /// Independent signs at every grid point.
    RandomSign,
    /// Gaussian bump whose width is `width_factor · β(δ)`, with `β = α^κ`.
    Bump { width_factor: f64 },
}

impl Default for StudyNoise {
    fn default() -> Self {
        Self::Bump { width_factor: 1.0 }
    }
}

/// Settings of a noise sweep. Loads from `key = value` TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid_n: usize,
    pub regime: RegimeKind,
    /// Hölder order, used when `regime = "hoelder"`.
    pub p: f64,
    /// Decay rate of the low-order truth.
    pub lambda: f64,
    pub r: f64,
    pub a: f64,
    pub m: usize,
    /// Constant `C` in `α = C δ^e`.
    pub alpha_c: f64,
    /// Noise levels, strictly decreasing.
    pub deltas: Vec<f64>,
    pub seed: u64,
    pub noise: StudyNoise,
    /// Second grid for a sweep that checks grid independence; `0` disables it.
    pub confirm_grid_n: usize,
    pub slope_tolerance: f64,
    /// Bound on `max/min` of `error · ln(1/δ)` in the low-order regime.
    pub log_ratio_threshold: f64,
    pub out_dir: Option<PathBuf>,
    pub quadrature: QuadratureConfig,
    pub solver: SolverOptions,
}

/// Eight geometric noise levels from `1e-1` to `1e-4.5`.
pub fn default_deltas() -> Vec<f64> {
    (0..8).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid_n: 256,
            regime: RegimeKind::Hoelder,
            p: 1.0,
            lambda: DEFAULT_LAMBDA,
            r: 1.0,
            a: 1.0,
            m: 2,
            alpha_c: 1.0,
            deltas: default_deltas(),
            seed: 0,
            noise: StudyNoise::default(),
            confirm_grid_n: 128,
            slope_tolerance: 0.12,
            log_ratio_threshold: 5.0,
            out_dir: None,
            quadrature: QuadratureConfig::default(),
            solver: SolverOptions::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn regime(&self) -> Regime {
        match self.regime {
            RegimeKind::None => Regime::NoSmoothness,
            RegimeKind::Hoelder => Regime::Hoelder { p: self.p },
            RegimeKind::LowOrder => Regime::LowOrder,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.grid_n < 64 {
            return fail(format!("grid_n = {} must be at least 64", self.grid_n));
        }
        if self.confirm_grid_n != 0 && self.confirm_grid_n < 64 {
            return fail(format!(
                "confirm_grid_n = {} must be 0 or at least 64",
                self.confirm_grid_n
            ));
        }
        if !(self.r > 0.0 && self.a > 0.0 && self.alpha_c > 0.0) {
            return fail("r, a and alpha_c must be positive".into());
        }
        if (self.m as f64) < 1.0 + self.a {
            return fail(format!(
                "m = {} must be at least 1 + a = {}",
                self.m,
                1.0 + self.a
            ));
        }
        if self.deltas.is_empty() {
            return fail("deltas must not be empty".into());
        }
        for (i, &d) in self.deltas.iter().enumerate() {
            if !(d > 0.0 && d.is_finite()) || (i > 0 && d >= self.deltas[i - 1]) {
                return fail("deltas must be positive and strictly decreasing".into());
            }
        }
        if let StudyNoise::Bump { width_factor } = self.noise {
            if width_factor.is_nan() || width_factor <= 0.0 {
                return fail("noise width_factor must be positive".into());
            }
        }
        self.regime().validate()?;
        self.quadrature.validate()?;
        self.solver.validate()
    }
}
