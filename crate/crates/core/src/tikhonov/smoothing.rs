use crate::banach_scale::{sup_norm, GridFunction};
use crate::error::{domain, Result};
use crate::tikhonov::TikhonovProblem;

/// Smooth surrogate of `T` in the witness `v`: each sup norm is replaced by
///
/// ```text
/// LSE_μ(z) = μ ln Σ_i (e^{z_i/μ} + e^{-z_i/μ}),
/// ```
///
/// which overestimates `max |z_i|` by at most `μ ln(2n)`.
#[derive(Clone, Copy)]
pub struct SmoothedObjective<'p, 'a> {
    problem: &'p TikhonovProblem<'a>,
    misfit_temperature: f64,
    penalty_temperature: f64,
}

/// Smoothed value and the exact `T` at the same point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Values {
    pub smoothed: f64,
    pub exact: f64,
}

impl<'p, 'a> SmoothedObjective<'p, 'a> {
    pub fn new(
        problem: &'p TikhonovProblem<'a>,
        misfit_temperature: f64,
        penalty_temperature: f64,
    ) -> Result<Self> {
        for (name, t) in [
            ("misfit_temperature", misfit_temperature),
            ("penalty_temperature", penalty_temperature),
        ] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(domain(name, t, "temperature must be positive"));
            }
        }
        Ok(Self {
            problem,
            misfit_temperature,
            penalty_temperature,
        })
    }

    pub fn value(&self, v: &GridFunction) -> Result<f64> {
        Ok(self.value_and_gradient(v)?.0)
    }

    pub fn value_and_gradient(&self, v: &GridFunction) -> Result<(f64, GridFunction)> {
        let mut grad = vec![0.0; v.len()];
        let values = self.eval(v.values(), &mut grad)?;
        Ok((values.smoothed, GridFunction::new(grad)?))
    }

    /// Fills `grad` and returns both objective values.
    pub(crate) fn eval(&self, v: &[f64], grad: &mut [f64]) -> Result<Values> {
        let prob = self.problem;
        let op = prob.forward().operator();
        let v_fn = GridFunction::new(v.to_vec())?;
        let u = prob.lift(&v_fn)?;
        let fu = prob.forward().evaluate(&u)?;
        let misfit: Vec<f64> = fu
            .values()
            .iter()
            .zip(prob.data().values())
            .map(|(f, d)| f - d)
            .collect();

        let mut w_misfit = vec![0.0; v.len()];
        let l_misfit = log_sum_exp(&misfit, self.misfit_temperature, &mut w_misfit);
        let l_penalty = log_sum_exp(v, self.penalty_temperature, grad);

        let r = prob.exponent();
        let alpha = prob.alpha();
        let smoothed = l_misfit.powf(r) + alpha * l_penalty.powf(r);
        let exact = sup_norm(&misfit).powf(r) + alpha * sup_norm(v).powf(r);

        // ∇_v LSE(F(ū + G v) - f) = Gᵀ F'(u)ᵀ ω
        let back = prob
            .forward()
            .derivative_adjoint(&u, &GridFunction::new(w_misfit)?)?;
        let misfit_grad = op.apply_adjoint(&back)?;
        let c_misfit = r * l_misfit.powf(r - 1.0);
        let c_penalty = alpha * r * l_penalty.powf(r - 1.0);
        grad.iter_mut()
            .zip(misfit_grad.values())
            .for_each(|(g, m)| *g = c_misfit * m + c_penalty * *g);
        Ok(Values { smoothed, exact })
    }
}

/// `μ ln Σ (e^{z_i/μ} + e^{-z_i/μ})`, writing its gradient into `weights`.
fn log_sum_exp(z: &[f64], mu: f64, weights: &mut [f64]) -> f64 {
    let peak = sup_norm(z);
    let mut total = 0.0;
    for (w, &zi) in weights.iter_mut().zip(z) {
        let plus = ((zi - peak) / mu).exp();
        let minus = ((-zi - peak) / mu).exp();
        total += plus + minus;
        *w = plus - minus;
    }
    weights.iter_mut().for_each(|w| *w /= total);
    peak + mu * total.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_bounds_the_max() {
        let z = [0.3, -1.2, 0.9, 0.0];
        let mut w = [0.0; 4];
        for mu in [1.0, 0.1, 1e-3] {
            let l = log_sum_exp(&z, mu, &mut w);
            assert!(l >= 1.2);
            assert!(l <= 1.2 + mu * 8f64.ln() + 1e-15);
        }
        assert!((w[1] + 1.0).abs() < 1e-12);
    }
}
