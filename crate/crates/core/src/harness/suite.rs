use std::fs::File;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::banach_scale::{
    interpolation_check, log_smooth_element, GridFunction, QuadratureConfig, ScaleOperator,
};
use crate::error::{Error, Result};
use crate::exp_volterra::{nonlinearity_check, ExpVolterraProblem};
use crate::lavrentiev::{decay_check, eval_g, ProbeConfig, RegularizerFamily};

use super::{oracle, run_rate_study, write_json, write_rate_outputs, ExperimentConfig, ReportMeta};

/// Suite names accepted by [`run_suite`], in execution order.
pub const SUITE_NAMES: [&str; 5] = [
    "fracpow-check",
    "decay-check",
    "aux-rates",
    "nonlinearity-check",
    "rate-study",
];

/// Grids and seeds for the verification suites.
///
/// Asymptotic slopes of the regularizer and of the auxiliary element only
/// settle on fine grids, so those checks have their own sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSettings {
    /// Grid for the fractional-power, integer-decay and nonlinearity checks.
    pub grid_n: usize,
    /// Grid for the fractional decay slope.
    pub decay_grid_n: usize,
    /// Grid for the Hölder g-function slopes.
    pub hoelder_grid_n: usize,
    /// Grid for the logarithmic g-function bounds.
    pub log_grid_n: usize,
    /// Quadrature step for the logarithmically smooth truth on `log_grid_n`.
    pub log_step: f64,
    /// Random probes per decay estimate.
    pub probes: usize,
    pub nonlinearity_samples: usize,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
    /// Configuration of the `rate-study` suite.
    pub experiment: ExperimentConfig,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self {
            grid_n: 256,
            decay_grid_n: 32_769,
            hoelder_grid_n: 131_073,
            log_grid_n: 1_048_577,
            log_step: 0.1,
            probes: 100,
            nonlinearity_samples: 1000,
            seed: 0,
            quadrature: QuadratureConfig::default(),
            experiment: ExperimentConfig::default(),
        }
    }
}

/// One measured quantity against its threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub case: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    fn at_most(check: &str, case: String, value: f64, threshold: f64) -> Self {
        Self {
            check: check.into(),
            case,
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    fn within(check: &str, case: String, value: f64, centre: f64, tol: f64) -> Self {
        Self {
            check: check.into(),
            case,
            value,
            threshold: tol,
            pass: (value - centre).abs() <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<CheckRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub outcomes: Vec<SuiteOutcome>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// Runs the named suites (all of them if `names` is empty). With `out_dir`,
/// each suite writes `<name>.csv` and `<name>.json` plus its detailed tables.
pub fn run_suite(
    names: &[String],
    settings: &SuiteSettings,
    out_dir: Option<&Path>,
    meta: &ReportMeta,
) -> Result<SuiteSummary> {
    for name in names {
        if !SUITE_NAMES.contains(&name.as_str()) {
            return Err(Error::Usage(format!(
                "unknown suite '{name}' (expected one of {})",
                SUITE_NAMES.join(", ")
            )));
        }
    }
    let selected: Vec<&str> = if names.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let out = Output { dir: out_dir, meta };
    let mut outcomes = Vec::with_capacity(selected.len());
    for name in selected {
        let checks = match name {
            "fracpow-check" => fracpow(settings)?,
            "decay-check" => decay(settings, &out)?,
            "aux-rates" => aux_rates(settings, &out)?,
            "nonlinearity-check" => nonlinearity(settings, &out)?,
            _ => rate_study(settings, &out)?,
        };
        let outcome = SuiteOutcome {
            name: name.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        };
        out.report(name, settings, &outcome)?;
        outcomes.push(outcome);
    }
    Ok(SuiteSummary { outcomes })
}

struct Output<'a> {
    dir: Option<&'a Path>,
    meta: &'a ReportMeta,
}

impl Output<'_> {
    fn file(&self, name: &str) -> Result<Option<File>> {
        match self.dir {
            Some(dir) => Ok(Some(File::create(dir.join(name))?)),
            None => Ok(None),
        }
    }

    fn path(&self, name: &str) -> Option<PathBuf> {
        self.dir.map(|d| d.join(name))
    }

    fn report(&self, name: &str, settings: &SuiteSettings, outcome: &SuiteOutcome) -> Result<()> {
        if let Some(file) = self.file(&format!("{name}.csv"))? {
            let mut w = csv::Writer::from_writer(file);
            for row in &outcome.checks {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        if let Some(path) = self.path(&format!("{name}.json")) {
            write_json(&path, self.meta, settings, outcome)?;
        }
        Ok(())
    }
}

fn quarter_decades(from_exp: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| 10f64.powf(from_exp - 0.25 * k as f64))
        .collect()
}

/// A labelled test function.
type Sample = (&'static str, fn(f64) -> f64);

fn fracpow(s: &SuiteSettings) -> Result<Vec<CheckRow>> {
    let op = ScaleOperator::new(s.grid_n)?;
    let cfg = &s.quadrature;
    let mut checks = Vec::new();
    let cases: [Sample; 3] = [
        ("1", |_| 1.0),
        ("x", |x| x),
        ("sin(pi x)", |x| (std::f64::consts::PI * x).sin()),
    ];
    for p in [0.25, 0.5, 0.75] {
        for (label, f) in cases {
            let u = op.sample(f)?;
            let err = op
                .fractional_power(p, &u, cfg)?
                .distance(&oracle::riemann_liouville(p, &u)?)?;
            checks.push(CheckRow::at_most(
                "riemann-liouville",
                format!("p={p} u={label}"),
                err,
                1e-3,
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = rng.gen_range(0.05..0.95);
        let q = rng.gen_range(0.05..0.95);
        let u = random_unit(&mut rng, op.len())?;
        let lhs = op.fractional_power(p, &op.fractional_power(q, &u, cfg)?, cfg)?;
        let rhs = op.fractional_power(p + q, &u, cfg)?;
        worst = worst.max(lhs.distance(&rhs)?);
    }
    checks.push(CheckRow::at_most(
        "semigroup",
        "20 random triples".into(),
        worst,
        4.0 * cfg.tail_tol,
    ));

    for p in [0.25, 0.5, 0.75] {
        let mut violations = 0;
        for _ in 0..100 {
            let u = random_unit(&mut rng, op.len())?;
            if !interpolation_check(&op, p, 1.0, &u, cfg)?.holds {
                violations += 1;
            }
        }
        checks.push(CheckRow::at_most(
            "interpolation",
            format!("p={p} q=1, violations of 100"),
            violations as f64,
            0.0,
        ));
    }
    Ok(checks)
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Result<GridFunction> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let norm = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    GridFunction::new(raw.into_iter().map(|v| v / norm).collect())
}

fn decay(s: &SuiteSettings, out: &Output) -> Result<Vec<CheckRow>> {
    let m = s.experiment.m;
    let betas = quarter_decades(-1.0, 13);
    let probes = ProbeConfig {
        random: s.probes,
        seed: s.seed,
    };
    let mut checks = Vec::new();
    let fam = RegularizerFamily::new(ScaleOperator::new(s.grid_n)?, m)?;
    for p in [0usize, 1, 2].into_iter().filter(|&p| p <= m) {
        let report = decay_check(&fam, p as f64, &betas, &probes, &s.quadrature)?;
        if let Some(f) = out.file(&format!("decay_p{p}.csv"))? {
            report.write_csv(f)?;
        }
        checks.push(CheckRow::at_most(
            "decay-ratio",
            format!("p={p} m={m} n={}", s.grid_n),
            report.max_ratio,
            fam.decay_constant(p as f64),
        ));
    }
    let fine = RegularizerFamily::new(ScaleOperator::new(s.decay_grid_n)?, m)?;
    let report = decay_check(&fine, 0.5, &betas, &probes, &s.quadrature)?;
    if let Some(f) = out.file("decay_p0.5.csv")? {
        report.write_csv(f)?;
    }
    checks.push(CheckRow::within(
        "decay-slope",
        format!("p=0.5 m={m} n={}", s.decay_grid_n),
        report.fitted_slope.unwrap_or(f64::NAN),
        0.5,
        0.05,
    ));
    Ok(checks)
}

fn aux_rates(s: &SuiteSettings, out: &Output) -> Result<Vec<CheckRow>> {
    let m = s.experiment.m;
    let a = 1.0;
    let mut checks = Vec::new();

    let op = ScaleOperator::new(s.hoelder_grid_n)?;
    let fam = RegularizerFamily::new(op, m)?;
    let truth = op.fractional_power(0.5, &op.sample(|_| 1.0)?, &s.quadrature)?;
    let zero = GridFunction::zeros(op.len())?;
    let table = eval_g(
        &fam,
        &quarter_decades(-1.0, 13),
        &truth,
        &zero,
        a,
        &s.quadrature,
    )?;
    if let Some(f) = out.file("g_hoelder.csv")? {
        table.write_csv(f)?;
    }
    for (k, slope) in table.slopes().into_iter().enumerate() {
        checks.push(CheckRow::within(
            "g-slope",
            format!("g{} hoelder p=0.5 n={}", k + 1, op.len()),
            slope.unwrap_or(f64::NAN),
            0.5,
            0.07,
        ));
    }

    let op = ScaleOperator::new(s.log_grid_n)?;
    let fam = RegularizerFamily::new(op, m)?;
    let log_cfg = QuadratureConfig {
        step: s.log_step,
        ..s.quadrature.clone()
    };
    let truth = log_smooth_element(&op, &op.sample(|_| 1.0)?, s.experiment.lambda, &log_cfg)?;
    let zero = GridFunction::zeros(op.len())?;
    let betas: Vec<f64> = (0..11).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect();
    let table = eval_g(&fam, &betas, &truth, &zero, a, &s.quadrature)?;
    if let Some(f) = out.file("g_log.csv")? {
        table.write_csv(f)?;
    }
    let columns: [fn(&crate::lavrentiev::GRow) -> f64; 3] = [|r| r.g1, |r| r.g2, |r| r.g3];
    for (k, g) in columns.into_iter().enumerate() {
        let scaled: Vec<f64> = table
            .rows
            .iter()
            .map(|r| g(r) * (1.0 / r.beta).ln())
            .collect();
        let hi = scaled.iter().cloned().fold(0.0, f64::max);
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        checks.push(CheckRow::at_most(
            "g-log-ratio",
            format!("g{} low-order n={}", k + 1, op.len()),
            hi / lo,
            5.0,
        ));
    }
    Ok(checks)
}

fn nonlinearity(s: &SuiteSettings, out: &Output) -> Result<Vec<CheckRow>> {
    let op = ScaleOperator::new(s.grid_n)?;
    let truth = op.sample(|x| x)?;
    let prob = ExpVolterraProblem::new(op, truth)?;
    let report = nonlinearity_check(&prob, 0.5, prob.c1() / 2.0, s.nonlinearity_samples, s.seed)?;
    if let Some(f) = out.file("nonlinearity.csv")? {
        report.write_csv(f)?;
    }
    let case = |what: &str, applicable: usize| {
        format!("{what}, {applicable} of {} applicable", report.rows.len())
    };
    Ok(vec![
        CheckRow::at_most(
            "nonlinearity",
            case("preparatory", report.rows.len()),
            report.prep_violations as f64,
            0.0,
        ),
        CheckRow::at_most(
            "nonlinearity",
            case("rho = 0.5", report.a_applicable),
            report.a_violations as f64,
            0.0,
        ),
        CheckRow::at_most(
            "nonlinearity",
            case("eps = c1/2", report.b_applicable),
            report.b_violations as f64,
            0.0,
        ),
    ])
}

fn rate_study(s: &SuiteSettings, out: &Output) -> Result<Vec<CheckRow>> {
    let report = run_rate_study(&s.experiment)?;
    if let Some(dir) = out.dir {
        write_rate_outputs(dir, &s.experiment, &report, out.meta)?;
    }
    let mut checks = vec![CheckRow {
        check: "rate-study".into(),
        case: report.summary(),
        value: report.fitted_slope.or(report.log_ratio).unwrap_or(f64::NAN),
        threshold: report.slope_tolerance,
        pass: report.pass,
    }];
    if let Some(gap) = report.confirmation.as_ref().and_then(|c| c.slope_gap) {
        checks.push(CheckRow::at_most(
            "rate-confirmation",
            format!(
                "slope gap to n={}",
                report.confirmation.as_ref().map_or(0, |c| c.grid_n)
            ),
            gap,
            super::CONFIRMATION_TOLERANCE,
        ));
    }
    Ok(checks)
}
