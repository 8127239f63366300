//! Experiment runner: noise sweeps, verification suites and their reports.
//!
//! Every report is written as CSV (one row per sample or noise level) and as
//! JSON wrapping the configuration, the library version and a timestamp.

mod config;
pub mod oracle;
mod rate;
mod suite;

pub use config::{default_deltas, ExperimentConfig, RegimeKind, StudyNoise};
pub use rate::{run_rate_study, Confirmation, RateReport, RateRow, CONFIRMATION_TOLERANCE};
pub use suite::{run_suite, SuiteOutcome, SuiteSettings, SuiteSummary, SUITE_NAMES};

pub use crate::fit::{fit_slope, SlopeFit};

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance stamped into every JSON report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub version: String,
    /// ISO-8601 UTC timestamp.
    pub generated_at: String,
}

impl ReportMeta {
    pub fn at(time: DateTime<Utc>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at: time.to_rfc3339_opts(SecondsFormat::Secs, true),
        }
    }

    /// The current time, or `SOURCE_DATE_EPOCH` when set, so that repeated
    /// runs can produce identical files.
    pub fn now() -> Result<Self> {
        match std::env::var("SOURCE_DATE_EPOCH") {
            Ok(s) => {
                let secs: i64 = s.trim().parse().map_err(|_| {
                    Error::Config(format!("SOURCE_DATE_EPOCH '{s}' is not an integer"))
                })?;
                let time = DateTime::from_timestamp(secs, 0).ok_or_else(|| {
                    Error::Config(format!("SOURCE_DATE_EPOCH {secs} out of range"))
                })?;
                Ok(Self::at(time))
            }
            Err(_) => Ok(Self::at(Utc::now())),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    version: &'a str,
    generated_at: &'a str,
    config: &'a C,
    report: &'a R,
}

/// Writes `{version, generated_at, config, report}` as pretty JSON.
pub fn write_json<C: Serialize, R: Serialize>(
    path: &Path,
    meta: &ReportMeta,
    config: &C,
    report: &R,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(
        &mut out,
        &Envelope {
            version: &meta.version,
            generated_at: &meta.generated_at,
            config,
            report,
        },
    )?;
    std::io::Write::write_all(&mut out, b"\n")?;
    Ok(())
}

/// Writes `rate_study.csv` and `rate_study.json` into `dir`.
pub fn write_rate_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    report: &RateReport,
    meta: &ReportMeta,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    report.write_csv(File::create(dir.join("rate_study.csv"))?)?;
    write_json(&dir.join("rate_study.json"), meta, cfg, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_timestamp_format() {
        let meta = ReportMeta::at(DateTime::from_timestamp(0, 0).unwrap());
        assert_eq!(meta.generated_at, "1970-01-01T00:00:00Z");
        assert_eq!(meta.version, env!("CARGO_PKG_VERSION"));
    }
}
