use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::banach_scale::{sup_norm, GridFunction};
use crate::error::{domain, Result};
use crate::exp_volterra::ExpVolterraProblem;

/// Outcome of one inequality on one sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// The precondition of a conditional inequality does not hold.
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Check {
    fn from_slack(slack: f64) -> Self {
        if slack >= 0.0 {
            Check::Pass
        } else {
            Check::Fail
        }
    }
}

/// One sampled `u` with `θ = G(u - u†)` and `Δ = F(u) - F(u†)`.
///
/// Serializes as `sample,theta_norm,delta_norm,ineq_prep,ineq_a,ineq_b,margin`,
/// where `margin` is the smallest slack over the checks that apply.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityRow {
    pub sample: usize,
    pub theta_norm: f64,
    pub delta_norm: f64,
    /// `|Δ - F(u†) θ| ≤ |θ| |Δ|` at every grid point.
    pub ineq_prep: Check,
    /// `(1-ρ) ‖Δ‖ / c2 ≤ ‖θ‖` when `‖θ‖ ≤ ρ`.
    pub ineq_a: Check,
    /// `ε ‖θ‖ ≤ ‖Δ‖` when `‖Δ‖ ≤ c1 - ε`.
    pub ineq_b: Check,
    pub margin: f64,
}

/// All sampled rows plus violation counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityReport {
    pub rho: f64,
    pub eps: f64,
    pub rows: Vec<NonlinearityRow>,
    pub prep_violations: usize,
    pub a_violations: usize,
    pub b_violations: usize,
    /// Rows where the precondition of (a) resp. (b) held.
    pub a_applicable: usize,
    pub b_applicable: usize,
    pub worst_margin: f64,
}

impl NonlinearityReport {
    pub fn all_passed(&self) -> bool {
        self.prep_violations == 0 && self.a_violations == 0 && self.b_violations == 0
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl ExpVolterraProblem {
    /// Evaluates the three inequalities at a single `u`.
    pub fn nonlinearity_at(
        &self,
        sample: usize,
        u: &GridFunction,
        rho: f64,
        eps: f64,
    ) -> Result<NonlinearityRow> {
        let theta = self
            .operator()
            .apply(&u.zip_with(self.u_true(), |a, b| a - b)?)?;
        let fu = self.forward(u)?;
        let f_true = self.f_true();

        let mut prep_slack = f64::INFINITY;
        let mut delta = Vec::with_capacity(u.len());
        for i in 0..u.len() {
            let d = fu.values()[i] - f_true.values()[i];
            let t = theta.values()[i];
            // Allowance for the rounding of the two exponentials in `d`.
            let rounding = 4.0 * f64::EPSILON * fu.values()[i].abs().max(f_true.values()[i].abs());
            let slack = t.abs() * d.abs() - (d - f_true.values()[i] * t).abs() + rounding;
            prep_slack = prep_slack.min(slack);
            delta.push(d);
        }
        let theta_norm = theta.sup_norm();
        let delta_norm = sup_norm(&delta);

        let mut margin = prep_slack;
        let ineq_a = if theta_norm <= rho {
            let slack = theta_norm - (1.0 - rho) * delta_norm / self.c2();
            margin = margin.min(slack);
            Check::from_slack(slack)
        } else {
            Check::NotApplicable
        };
        let ineq_b = if delta_norm <= self.c1() - eps {
            let slack = delta_norm - eps * theta_norm;
            margin = margin.min(slack);
            Check::from_slack(slack)
        } else {
            Check::NotApplicable
        };
        Ok(NonlinearityRow {
            sample,
            theta_norm,
            delta_norm,
            ineq_prep: Check::from_slack(prep_slack),
            ineq_a,
            ineq_b,
            margin,
        })
    }
}

/// Samples `u = u† + G ζ` for seeded perturbations `ζ`, scaled so that `‖θ‖` is
/// uniform in `(0, ρ]`, and checks the three inequalities for each.
///
/// Perturbation shapes cycle through independent uniform values, random
/// trigonometric sums and random step functions.
pub fn nonlinearity_check(
    prob: &ExpVolterraProblem,
    rho: f64,
    eps: f64,
    n_samples: usize,
    seed: u64,
) -> Result<NonlinearityReport> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(domain("rho", rho, "must lie in (0, 1)"));
    }
    if !(eps > 0.0 && eps < prob.c1()) {
        return Err(domain("eps", eps, "must lie in (0, c1)"));
    }
    let op = prob.operator();
    let n = op.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let zeta = random_shape(k % 3, n, &mut rng);
        let z = op.apply(&GridFunction::new(zeta)?)?;
        let theta_norm = op.apply(&z)?.sup_norm();
        let target = rho * (1.0 - rng.gen::<f64>());
        let u = prob.u_true().add_scaled(target / theta_norm, &z)?;
        rows.push(prob.nonlinearity_at(k, &u, rho, eps)?);
    }

    let count = |f: &dyn Fn(&NonlinearityRow) -> bool| rows.iter().filter(|r| f(r)).count();
    Ok(NonlinearityReport {
        rho,
        eps,
        prep_violations: count(&|r| r.ineq_prep == Check::Fail),
        a_violations: count(&|r| r.ineq_a == Check::Fail),
        b_violations: count(&|r| r.ineq_b == Check::Fail),
        a_applicable: count(&|r| r.ineq_a != Check::NotApplicable),
        b_applicable: count(&|r| r.ineq_b != Check::NotApplicable),
        worst_margin: rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
        rows,
    })
}

fn random_shape(kind: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let h = 1.0 / (n - 1) as f64;
    let shape: Vec<f64> = match kind {
        0 => (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        1 => {
            let terms: Vec<(f64, f64)> = (1..=5)
                .map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(0.0..2.0 * PI)))
                .collect();
            (0..n)
                .map(|i| {
                    let x = i as f64 * h;
                    terms
                        .iter()
                        .enumerate()
                        .map(|(j, (a, phase))| a * ((j + 1) as f64 * PI * x + phase).sin())
                        .sum()
                })
                .collect()
        }
        _ => {
            let levels: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            (0..n).map(|i| levels[((i * 4) / n).min(3)]).collect()
        }
    };
    if sup_norm(&shape) == 0.0 {
        vec![1.0; n]
    } else {
        shape
    }
}
