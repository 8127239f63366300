use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::banach_scale::{GridFunction, QuadratureConfig};
use crate::error::{domain, Error, Result};
use crate::lavrentiev::{make_aux, RegularizerFamily};
use crate::tikhonov::lbfgs::{self, Settings};
use crate::tikhonov::{SmoothedObjective, TikhonovProblem};

/// Budget and schedule of the smoothed descent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Smoothing temperatures, relative to the current sup norms, used in order.
    pub temperatures: Vec<f64>,
    /// Quasi-Newton iterations per temperature.
    pub max_iterations: usize,
    /// Number of stored curvature pairs.
    pub memory: usize,
    /// Seeded random starts in the first round.
    pub random_starts: usize,
    /// Amplitude of the random starting witnesses.
    pub random_scale: f64,
    /// Extra rounds with more starts and iterations if the first round is not certified.
    pub retry_rounds: usize,
    /// Relative slack in `T(u_min) ≤ T(u_aux)`.
    pub certificate_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            temperatures: vec![1e-1, 1e-2, 1e-3],
            max_iterations: 5000,
            memory: 20,
            random_starts: 1,
            random_scale: 1.0,
            retry_rounds: 2,
            certificate_tolerance: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.temperatures.is_empty() || self.temperatures.iter().any(|t| t.is_nan() || *t <= 0.0)
        {
            return Err(Error::Config(
                "temperatures must be a non-empty list of positive numbers".into(),
            ));
        }
        if self.max_iterations == 0 || self.memory == 0 {
            return Err(Error::Config(
                "max_iterations and memory must be positive".into(),
            ));
        }
        if self.certificate_tolerance.is_nan() || self.certificate_tolerance < 0.0 {
            return Err(domain(
                "certificate_tolerance",
                self.certificate_tolerance,
                "must be non-negative",
            ));
        }
        Ok(())
    }
}

/// An approximate minimizer with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub u_min: GridFunction,
    /// Witness of `u_min - ū`.
    pub v_min: GridFunction,
    pub objective: f64,
    pub residual: f64,
    pub penalty: f64,
    /// `T` at the auxiliary element with `β = α^κ`.
    pub certificate_bound: f64,
    pub certified: bool,
    /// Quasi-Newton iterations over all starts.
    pub iterations: usize,
}

/// [`minimize_with`] using default options and no warm start.
pub fn minimize(
    prob: &TikhonovProblem<'_>,
    fam: &RegularizerFamily,
    u_true: &GridFunction,
    seed: u64,
) -> Result<MinimizeResult> {
    minimize_with(prob, fam, u_true, seed, &SolverOptions::default(), None)
}

/// Minimizes `T` over `u = ū + G v` and certifies the result against the
/// auxiliary element built from `u_true`.
///
/// Starts from `v = 0`, from `warm_start` if given, and from seeded random
/// witnesses; each start runs the temperature schedule with L-BFGS on the
/// smoothed objective. The best point by the exact `T` over every evaluation
/// is kept. The truth is used only for the bound, never as a start. If the
/// bound is missed, retry rounds add starts and iterations; if it is still
/// missed, [`Error::Uncertified`] carries the best point.
pub fn minimize_with(
    prob: &TikhonovProblem<'_>,
    fam: &RegularizerFamily,
    u_true: &GridFunction,
    seed: u64,
    opts: &SolverOptions,
    warm_start: Option<&GridFunction>,
) -> Result<MinimizeResult> {
    opts.validate()?;
    let n = prob.forward().operator().len();
    u_true.check_len(n)?;
    if fam.operator().len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: fam.operator().len(),
        });
    }

    let beta = prob.alpha().powf(prob.kappa());
    let aux = make_aux(
        fam,
        beta,
        u_true,
        prob.u_bar_witness(),
        prob.ill_posedness(),
        &QuadratureConfig::default(),
    )?;
    let bound = prob.objective(&aux.u_aux, &aux.witness)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Best::new(n);
    let mut iterations = 0;
    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    if let Some(w) = warm_start {
        w.check_len(n)?;
        starts.push(w.values().to_vec());
    }
    let mut random_count = opts.random_starts;
    let mut max_iterations = opts.max_iterations;
    for round in 0..=opts.retry_rounds {
        if round > 0 {
            starts.clear();
            starts.push(best.v.clone());
            random_count *= 2;
            max_iterations *= 2;
        }
        for _ in 0..random_count {
            starts.push(
                (0..n)
                    .map(|_| opts.random_scale * rng.gen_range(-1.0..=1.0))
                    .collect(),
            );
        }
        for start in &starts {
            iterations += descend(prob, start.clone(), opts, max_iterations, &mut best)?;
        }
        if best.value <= bound * (1.0 + opts.certificate_tolerance) {
            break;
        }
    }

    let v_min = GridFunction::new(best.v)?;
    let eval = prob.evaluate(&v_min)?;
    let result = MinimizeResult {
        certified: eval.objective <= bound * (1.0 + opts.certificate_tolerance),
        u_min: eval.u,
        v_min,
        objective: eval.objective,
        residual: eval.residual,
        penalty: eval.penalty,
        certificate_bound: bound,
        iterations,
    };
    if result.certified {
        Ok(result)
    } else {
        Err(Error::Uncertified {
            best: Box::new(result),
        })
    }
}

struct Best {
    value: f64,
    v: Vec<f64>,
}

impl Best {
    fn new(n: usize) -> Self {
        Self {
            value: f64::INFINITY,
            v: vec![0.0; n],
        }
    }

    fn offer(&mut self, value: f64, v: &[f64]) {
        if value < self.value {
            self.value = value;
            self.v.copy_from_slice(v);
        }
    }
}

/// Runs the temperature schedule from `start`, recording every evaluated point.
fn descend(
    prob: &TikhonovProblem<'_>,
    start: Vec<f64>,
    opts: &SolverOptions,
    max_iterations: usize,
    best: &mut Best,
) -> Result<usize> {
    let mut v = start;
    let mut iterations = 0;
    let settings = Settings {
        memory: opts.memory,
        max_iterations,
        rel_decrease: 1e-15,
    };
    for &tau in &opts.temperatures {
        let eval = match prob.evaluate(&GridFunction::new(v.clone())?) {
            Ok(e) => e,
            Err(Error::Overflow { .. }) => return Ok(iterations),
            Err(e) => return Err(e),
        };
        best.offer(eval.objective, &v);
        let smooth = SmoothedObjective::new(
            prob,
            tau * eval.residual.max(1e-12),
            tau * eval.penalty.max(1e-3),
        )?;
        let outcome = lbfgs::minimize(
            |x, g| match smooth.eval(x, g) {
                Ok(values) => {
                    best.offer(values.exact, x);
                    values.smoothed
                }
                Err(_) => f64::INFINITY,
            },
            v,
            settings,
        );
        iterations += outcome.iterations;
        v = outcome.x;
    }
    Ok(iterations)
}
