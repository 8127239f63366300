//! The Tikhonov functional `T(u) = ‖F(u) - f^δ‖^r + α ‖u - ū‖_1^r` over the affine
//! slice `u = ū + G v`, a priori parameter rules, and a certified minimizer.

mod lbfgs;
mod smoothing;
mod solve;

pub use smoothing::SmoothedObjective;
pub use solve::{minimize, minimize_with, MinimizeResult, SolverOptions};

use serde::{Deserialize, Serialize};

use crate::banach_scale::GridFunction;
use crate::error::{domain, Error, Result};
use crate::exp_volterra::{ForwardModel, Regime};

/// A regularized problem for fixed data and parameter.
///
/// The search variable is the witness `v` of `u = ū + G v`, whose sup norm is
/// the penalty `‖u - ū‖_1`. The initial guess is `ū = G · u_bar_witness`.
#[derive(Clone)]
pub struct TikhonovProblem<'a> {
    forward: &'a dyn ForwardModel,
    data: GridFunction,
    delta: f64,
    u_bar_witness: GridFunction,
    u_bar: GridFunction,
    r: f64,
    a: f64,
    alpha: f64,
}

/// Both terms of `T` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub u: GridFunction,
    pub residual: f64,
    pub penalty: f64,
    pub objective: f64,
}

impl<'a> TikhonovProblem<'a> {
    /// Problem with `r = 1`, `a = 1`, `δ = 0` and `ū = 0`.
    pub fn new(forward: &'a dyn ForwardModel, data: GridFunction, alpha: f64) -> Result<Self> {
        let n = forward.operator().len();
        data.check_len(n)?;
        positive("alpha", alpha)?;
        Ok(Self {
            forward,
            data,
            delta: 0.0,
            u_bar_witness: GridFunction::zeros(n)?,
            u_bar: GridFunction::zeros(n)?,
            r: 1.0,
            a: 1.0,
            alpha,
        })
    }

    pub fn with_exponent(mut self, r: f64) -> Result<Self> {
        positive("r", r)?;
        self.r = r;
        Ok(self)
    }

    pub fn with_ill_posedness(mut self, a: f64) -> Result<Self> {
        positive("a", a)?;
        self.a = a;
        Ok(self)
    }

    pub fn with_noise_level(mut self, delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(domain("delta", delta, "noise level must be non-negative"));
        }
        self.delta = delta;
        Ok(self)
    }

    /// Sets `ū = G · witness`.
    pub fn with_initial_guess(mut self, witness: GridFunction) -> Result<Self> {
        self.u_bar = self.forward.operator().apply(&witness)?;
        self.u_bar_witness = witness;
        Ok(self)
    }

    pub fn forward(&self) -> &'a dyn ForwardModel {
        self.forward
    }

    pub fn data(&self) -> &GridFunction {
        &self.data
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn u_bar(&self) -> &GridFunction {
        &self.u_bar
    }

    pub fn u_bar_witness(&self) -> &GridFunction {
        &self.u_bar_witness
    }

    pub fn exponent(&self) -> f64 {
        self.r
    }

    pub fn ill_posedness(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `κ = 1 / (r (1 + a))`, so that the auxiliary element uses `β = α^κ`.
    pub fn kappa(&self) -> f64 {
        kappa(self.r, self.a)
    }

    /// `ū + G v`.
    pub fn lift(&self, v: &GridFunction) -> Result<GridFunction> {
        Ok(&self.u_bar + &self.forward.operator().apply(v)?)
    }

    /// `T` at `v`, with `u = ū + G v`.
    pub fn evaluate(&self, v: &GridFunction) -> Result<Evaluation> {
        let u = self.lift(v)?;
        let residual = self.forward.evaluate(&u)?.distance(&self.data)?;
        let penalty = v.sup_norm();
        Ok(Evaluation {
            objective: residual.powf(self.r) + self.alpha * penalty.powf(self.r),
            u,
            residual,
            penalty,
        })
    }

    /// `T(u)` where `v` witnesses `u - ū`. Fails if `u` and `ū + G v` differ by
    /// more than `1e-9 · max(1, ‖u‖)`.
    pub fn objective(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        let eval = self.evaluate(v)?;
        let gap = eval.u.distance(u)?;
        if gap > 1e-9 * u.sup_norm().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "u differs from u_bar + G v by {gap:e}"
            )));
        }
        Ok(eval.objective)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(name, value, "must be positive and finite"))
    }
}

/// `κ = 1 / (r (1 + a))`.
pub fn kappa(r: f64, a: f64) -> f64 {
    1.0 / (r * (1.0 + a))
}

/// An a priori rule `α = C δ^e`, with the exponent set by the smoothness regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamChoice {
    pub regime: Regime,
    pub constant: f64,
}

impl ParamChoice {
    pub fn new(regime: Regime, constant: f64) -> Result<Self> {
        regime.validate()?;
        positive("C", constant)?;
        Ok(Self { regime, constant })
    }

    /// Exponent `e` of `α = C δ^e`: `r (1 + a) / (p + a)` for Hölder order `p`,
    /// `1` for low-order smoothness and `r` without smoothness.
    pub fn exponent(&self, r: f64, a: f64) -> f64 {
        match self.regime {
            Regime::Hoelder { p } => 1.0 / (kappa(r, a) * (p + a)),
            Regime::LowOrder => 1.0,
            Regime::NoSmoothness => r,
        }
    }
}

/// `α(δ)` for the given rule.
pub fn choose_alpha(pc: &ParamChoice, delta: f64, r: f64, a: f64) -> Result<f64> {
    pc.regime.validate()?;
    positive("delta", delta)?;
    positive("r", r)?;
    positive("a", a)?;
    Ok(pc.constant * delta.powf(pc.exponent(r, a)))
}
