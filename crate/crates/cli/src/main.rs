use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oversmooth::error::Error;
use oversmooth::harness::{
    run_suite, ExperimentConfig, RegimeKind, ReportMeta, SuiteSettings, SuiteSummary,
};

/// Verification suites and noise sweeps for oversmoothing Tikhonov regularization.
///
/// Exit status: 0 when every check passes, 1 when a check fails or a run
/// breaks down, 2 on invalid arguments or configuration.
#[derive(Parser, Debug)]
#[command(name = "oversmooth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid size for the checks and the rate study.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV and JSON reports.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Experiment configuration in `key = value` form.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    regime: Option<RegimeArg>,
    /// Hölder order of the truth.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Exponent of both terms of the functional.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Lavrentiev iterations.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Constant in the a priori rule for alpha.
    #[arg(long, global = true)]
    alpha_c: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fractional powers against Riemann–Liouville, semigroup and interpolation.
    FracpowCheck,
    /// Decay of the Lavrentiev defect operator.
    DecayCheck,
    /// Decay of the auxiliary element's g-functions.
    AuxRates,
    /// Pointwise nonlinearity conditions of the exponential model.
    NonlinearityCheck,
    /// Noise sweep with certified minimizers and a fitted rate.
    RateStudy,
    /// Several suites; all of them when no name is given.
    Suite { names: Vec<String> },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    None,
    Hoelder,
    LowOrder,
}

impl From<RegimeArg> for RegimeKind {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::None => RegimeKind::None,
            RegimeArg::Hoelder => RegimeKind::Hoelder,
            RegimeArg::LowOrder => RegimeKind::LowOrder,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            for outcome in &summary.outcomes {
                for check in &outcome.checks {
                    println!(
                        "{} {:<18} {:<48} value={:.6e} threshold={:.3e}",
                        if check.pass { "PASS" } else { "FAIL" },
                        check.check,
                        check.case,
                        check.value,
                        check.threshold
                    );
                }
                println!(
                    "{}: {}",
                    outcome.name,
                    if outcome.pass { "pass" } else { "FAIL" }
                );
            }
            if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::Usage(_) | Error::Config(_) | Error::Domain { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> oversmooth::error::Result<SuiteSummary> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("{}: {io}", path.display())),
            other => other,
        })?,
        None => ExperimentConfig::default(),
    };
    if let Some(n) = cli.grid_n {
        cfg.grid_n = n;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(r) = cli.regime {
        cfg.regime = r.into();
    }
    if let Some(p) = cli.p {
        cfg.p = p;
    }
    if let Some(r) = cli.r {
        cfg.r = r;
    }
    if let Some(m) = cli.m {
        cfg.m = m;
    }
    if let Some(c) = cli.alpha_c {
        cfg.alpha_c = c;
    }
    if let Some(dir) = cli.out {
        cfg.out_dir = Some(dir);
    }
    cfg.validate()?;

    let names: Vec<String> = match cli.command {
        Command::FracpowCheck => vec!["fracpow-check".into()],
        Command::DecayCheck => vec!["decay-check".into()],
        Command::AuxRates => vec!["aux-rates".into()],
        Command::NonlinearityCheck => vec!["nonlinearity-check".into()],
        Command::RateStudy => vec!["rate-study".into()],
        Command::Suite { names } => names,
    };
    let settings = SuiteSettings {
        grid_n: cfg.grid_n,
        seed: cfg.seed,
        quadrature: cfg.quadrature.clone(),
        experiment: cfg.clone(),
        ..SuiteSettings::default()
    };
    let meta = ReportMeta::now()?;
    run_suite(&names, &settings, cfg.out_dir.as_deref(), &meta)
}
