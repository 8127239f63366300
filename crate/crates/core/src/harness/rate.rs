use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::banach_scale::ScaleOperator;
use crate::error::{Error, Result};
use crate::exp_volterra::{
    add_noise, make_truth, ExpVolterraProblem, NoiseKind, NoiseSpec, Regime, TruthSpec,
};
use crate::fit::fit_slope;
use crate::lavrentiev::RegularizerFamily;
use crate::tikhonov::{choose_alpha, kappa, minimize_with, ParamChoice, TikhonovProblem};

use super::config::{ExperimentConfig, StudyNoise};

/// Largest allowed gap between the fine-grid and confirmation-grid slopes.
pub const CONFIRMATION_TOLERANCE: f64 = 0.05;

/// One noise level of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub error_sup: f64,
    pub residual: f64,
    pub penalty: f64,
    pub certified: bool,
}

/// The same sweep on a second grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Confirmation {
    pub grid_n: usize,
    pub rows: Vec<RateRow>,
    pub fitted_slope: Option<f64>,
    /// `|slope - confirmation slope|`, for the Hölder regime.
    pub slope_gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub grid_n: usize,
    pub regime: Regime,
    pub rows: Vec<RateRow>,
    /// Log-log slope of error against `δ` over certified rows.
    pub fitted_slope: Option<f64>,
    /// `p / (p + a)` in the Hölder regime.
    pub expected_slope: Option<f64>,
    pub slope_tolerance: f64,
    /// Largest change of the slope when one certified row is left out.
    pub drop_one_change: Option<f64>,
    /// `max/min` of `error · ln(1/δ)` over certified rows.
    pub log_ratio: Option<f64>,
    pub log_ratio_threshold: f64,
    /// Errors strictly decrease from the second row on.
    pub monotone: bool,
    pub uncertified: usize,
    pub confirmation: Option<Confirmation>,
    pub pass: bool,
}

impl RateReport {
    pub const CSV_HEADER: &'static str = "delta,alpha,beta,error_sup,residual,penalty,certified";

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One-line verdict for terminals and logs.
    pub fn summary(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
        let detail = match self.regime {
            Regime::Hoelder { .. } => format!(
                "slope {} (expected {} ± {})",
                fmt(self.fitted_slope),
                fmt(self.expected_slope),
                self.slope_tolerance
            ),
            Regime::LowOrder => format!(
                "error·ln(1/δ) max/min {} (threshold {})",
                fmt(self.log_ratio),
                self.log_ratio_threshold
            ),
            Regime::NoSmoothness => format!("monotone after first row: {}", self.monotone),
        };
        format!(
            "rate-study n={} {:?}: {detail}, {}/{} certified",
            self.grid_n,
            self.regime,
            self.rows.len() - self.uncertified,
            self.rows.len()
        )
    }
}

/// Runs the noise sweep of `cfg`, on `grid_n` and on the confirmation grid if set.
///
/// Rows are solved from the largest to the smallest `δ`, each warm-started
/// from the previous minimizer. Uncertified rows are kept but left out of
/// every statistic; more than half uncertified is an error.
pub fn run_rate_study(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let regime = cfg.regime();
    let rows = sweep(cfg, cfg.grid_n)?;
    let uncertified = rows.iter().filter(|r| !r.certified).count();
    if 2 * uncertified > rows.len() {
        return Err(Error::StudyFailure {
            uncertified,
            total: rows.len(),
        });
    }
    let certified: Vec<&RateRow> = rows.iter().filter(|r| r.certified).collect();
    let fitted_slope = slope_of(&certified);
    let expected_slope = match regime {
        Regime::Hoelder { p } => Some(p / (p + cfg.a)),
        _ => None,
    };
    let drop_one_change = fitted_slope.and_then(|full| {
        (0..certified.len())
            .map(|skip| {
                let rest: Vec<&RateRow> = certified
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, r)| *r)
                    .collect();
                slope_of(&rest).map(|s| (s - full).abs())
            })
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max))
    });
    let log_ratio = log_ratio(&certified);
    let monotone = rows
        .windows(2)
        .skip(1)
        .all(|w| w[1].error_sup < w[0].error_sup);

    let confirmation = match cfg.confirm_grid_n {
        0 => None,
        n => {
            let rows = sweep(cfg, n)?;
            let certified: Vec<&RateRow> = rows.iter().filter(|r| r.certified).collect();
            let slope = slope_of(&certified);
            let slope_gap = match (regime, fitted_slope, slope) {
                (Regime::Hoelder { .. }, Some(a), Some(b)) => Some((a - b).abs()),
                _ => None,
            };
            Some(Confirmation {
                grid_n: n,
                rows,
                fitted_slope: slope,
                slope_gap,
            })
        }
    };

    let criterion = match regime {
        Regime::Hoelder { .. } => matches!(
            (fitted_slope, expected_slope),
            (Some(s), Some(e)) if (s - e).abs() <= cfg.slope_tolerance
        ),
        Regime::LowOrder => log_ratio.is_some_and(|q| q <= cfg.log_ratio_threshold),
        Regime::NoSmoothness => monotone,
    };
    Ok(RateReport {
        grid_n: cfg.grid_n,
        regime,
        pass: criterion && uncertified == 0,
        rows,
        fitted_slope,
        expected_slope,
        slope_tolerance: cfg.slope_tolerance,
        drop_one_change,
        log_ratio,
        log_ratio_threshold: cfg.log_ratio_threshold,
        monotone,
        uncertified,
        confirmation,
    })
}

fn slope_of(rows: &[&RateRow]) -> Option<f64> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.error_sup)).collect();
    fit_slope(&points).ok().map(|f| f.slope)
}

fn log_ratio(rows: &[&RateRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let stats = rows.iter().map(|r| r.error_sup * (1.0 / r.delta).ln());
    let (lo, hi) = stats.fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
        (lo.min(s), hi.max(s))
    });
    (lo > 0.0).then(|| hi / lo)
}

fn sweep(cfg: &ExperimentConfig, n: usize) -> Result<Vec<RateRow>> {
    let op = ScaleOperator::new(n)?;
    let regime = cfg.regime();
    let truth = TruthSpec {
        lambda: cfg.lambda,
        ..TruthSpec::new(regime)
    };
    let u_true = make_truth(&truth, &op, &cfg.quadrature)?;
    let model = ExpVolterraProblem::new(op, u_true.clone())?;
    let fam = RegularizerFamily::new(op, cfg.m)?;
    let rule = ParamChoice::new(regime, cfg.alpha_c)?;

    let mut rows = Vec::with_capacity(cfg.deltas.len());
    let mut warm = None;
    for (k, &delta) in cfg.deltas.iter().enumerate() {
        let alpha = choose_alpha(&rule, delta, cfg.r, cfg.a)?;
        let beta = alpha.powf(kappa(cfg.r, cfg.a));
        let kind = match cfg.noise {
            StudyNoise::RandomSign => NoiseKind::RandomSign,
            StudyNoise::Bump { width_factor } => NoiseKind::SmoothBump {
                width: width_factor * beta,
            },
        };
        let data = add_noise(
            model.f_true(),
            &NoiseSpec {
                delta,
                kind,
                seed: cfg.seed,
            },
        )?;
        let prob = TikhonovProblem::new(model.forward_model(), data, alpha)?
            .with_exponent(cfg.r)?
            .with_ill_posedness(cfg.a)?
            .with_noise_level(delta)?;
        let solver_seed = cfg.seed.wrapping_add(k as u64);
        let result = match minimize_with(
            &prob,
            &fam,
            &u_true,
            solver_seed,
            &cfg.solver,
            warm.as_ref(),
        ) {
            Ok(r) => r,
            Err(Error::Uncertified { best }) => *best,
            Err(e) => return Err(e),
        };
        rows.push(RateRow {
            delta,
            alpha,
            beta,
            error_sup: result.u_min.distance(&u_true)?,
            residual: result.residual,
            penalty: result.penalty,
            certified: result.certified,
        });
        warm = Some(result.v_min);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(delta: f64, error: f64) -> RateRow {
        RateRow {
            delta,
            alpha: delta,
            beta: delta.sqrt(),
            error_sup: error,
            residual: 0.0,
            penalty: 0.0,
            certified: true,
        }
    }

    #[test]
    fn log_ratio_of_exact_log_rate() {
        let rows: Vec<RateRow> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&d| row(d, 2.0 / (1.0 / d).ln()))
            .collect();
        let refs: Vec<&RateRow> = rows.iter().collect();
        assert!((log_ratio(&refs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_header() {
        let report = RateReport {
            grid_n: 64,
            regime: Regime::LowOrder,
            rows: vec![row(0.1, 0.2)],
            fitted_slope: None,
            expected_slope: None,
            slope_tolerance: 0.12,
            drop_one_change: None,
            log_ratio: None,
            log_ratio_threshold: 5.0,
            monotone: true,
            uncertified: 0,
            confirmation: None,
            pass: false,
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), RateReport::CSV_HEADER);
        assert_eq!(text.lines().count(), 2);
    }
}
