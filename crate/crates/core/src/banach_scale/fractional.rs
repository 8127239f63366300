use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::banach_scale::{GridFunction, ScaleOperator};
use crate::error::{domain, Result};

/// Quadrature settings for the Balakrishnan integral
/// `G^q u = (sin πq / π) ∫_0^∞ s^{q-1} (G + sI)⁻¹ G u ds` after substituting `s = e^t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Trapezoid step in `t`.
    pub step: f64,
    /// Target size of each truncated tail, relative to the input norm.
    pub tail_tol: f64,
    /// Explicit `(t_min, t_max)`. When absent the bounds follow from `tail_tol`
    /// and the power, see [`QuadratureConfig::bounds_for`].
    pub bounds: Option<(f64, f64)>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            step: 0.05,
            tail_tol: 1e-6,
            bounds: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(domain("step", self.step, "must be positive"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(domain("tail_tol", self.tail_tol, "must lie in (0, 1)"));
        }
        if let Some((lo, hi)) = self.bounds {
            if !(lo < 0.0 && lo.is_finite()) {
                return Err(domain("t_min", lo, "must be negative"));
            }
            if !(hi > 0.0 && hi.is_finite()) {
                return Err(domain("t_max", hi, "must be positive"));
            }
        }
        Ok(())
    }

    /// Truncation interval for the fractional part `q ∈ (0, 1)`.
    ///
    /// The integrand decays like `e^{qt}` on the left and `e^{(q-1)t}` on the
    /// right, so `t_min = ln(tol)/q'` and `t_max = -ln(tol)/(1-q')` with
    /// `q' = clamp(q, 0.1, 0.9)`.
    pub fn bounds_for(&self, q: f64) -> (f64, f64) {
        if let Some(b) = self.bounds {
            return b;
        }
        let q_eff = q.clamp(0.1, 0.9);
        let log_tol = self.tail_tol.ln();
        (log_tol / q_eff, -log_tol / (1.0 - q_eff))
    }
}

impl ScaleOperator {
    /// `G^p u` for real `p ≥ 0`, as `G^{p - ⌊p⌋} G^{⌊p⌋} u`.
    ///
    /// The fractional part uses the trapezoid rule in `t = ln s` on
    /// [`QuadratureConfig::bounds_for`], plus a first-order estimate of each
    /// truncated tail (the resolvent term is nearly constant for `s → 0` and
    /// decays like `1/s` for `s → ∞`). The result is a function of the grid
    /// matrix, so powers compose exactly up to quadrature error.
    pub fn fractional_power(
        &self,
        p: f64,
        u: &GridFunction,
        cfg: &QuadratureConfig,
    ) -> Result<GridFunction> {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(domain(
                "p",
                p,
                "fractional power must be finite and non-negative",
            ));
        }
        cfg.validate()?;
        u.check_len(self.len())?;

        let whole = p.floor();
        let q = p - whole;
        let mut current = u.values().to_vec();
        let mut scratch = vec![0.0; self.len()];
        for _ in 0..whole as usize {
            self.apply_slice(&current, &mut scratch);
            std::mem::swap(&mut current, &mut scratch);
        }
        if q > 0.0 {
            self.apply_slice(&current, &mut scratch);
            current = self.balakrishnan(q, &scratch, cfg);
        }
        GridFunction::from_computed(current)
    }

    /// `(sin πq / π) ∫ e^{qt} (G + e^t I)⁻¹ z dt` where `z = G y`.
    fn balakrishnan(&self, q: f64, gy: &[f64], cfg: &QuadratureConfig) -> Vec<f64> {
        let (t_min, t_max) = cfg.bounds_for(q);
        let intervals = ((t_max - t_min) / cfg.step).ceil().max(1.0) as usize;
        let dt = (t_max - t_min) / intervals as f64;
        let mut acc = vec![0.0; self.len()];
        for k in 0..=intervals {
            let t = t_min + k as f64 * dt;
            let mut weight = dt * (q * t).exp();
            if k == 0 || k == intervals {
                weight *= 0.5;
            }
            if k == 0 {
                weight += (q * t_min).exp() / q;
            }
            if k == intervals {
                weight += (q * t_max).exp() / (1.0 - q);
            }
            self.resolvent_accumulate(t.exp(), gy, weight, &mut acc);
        }
        let c = (PI * q).sin() / PI;
        acc.iter_mut().for_each(|a| *a *= c);
        acc
    }
}

/// An element `G^τ w` of the scale space `X_τ`, stored with its witness `w`.
///
/// The `τ`-norm is the sup norm of the witness; `G` is never inverted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothElement {
    witness: GridFunction,
    order: f64,
    value: GridFunction,
}

impl SmoothElement {
    pub fn new(
        op: &ScaleOperator,
        order: f64,
        witness: GridFunction,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        let value = op.fractional_power(order, &witness, cfg)?;
        Ok(Self {
            witness,
            order,
            value,
        })
    }

    pub fn witness(&self) -> &GridFunction {
        &self.witness
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn value(&self) -> &GridFunction {
        &self.value
    }

    /// `‖G^{-τ} value‖ = ‖witness‖`.
    pub fn tau_norm(&self) -> f64 {
        self.witness.sup_norm()
    }
}

/// Outcome of [`interpolation_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Interpolation constant `2(κ* + 1)`.
pub fn interpolation_constant(op: &ScaleOperator) -> f64 {
    2.0 * (op.kappa_star() + 1.0)
}

/// Checks `‖G^p u‖ ≤ c ‖G^q u‖^{p/q} ‖u‖^{1-p/q}` with `c = 2(κ* + 1)`.
///
/// A slack of `4 · tail_tol · ‖u‖` absorbs quadrature error.
pub fn interpolation_check(
    op: &ScaleOperator,
    p: f64,
    q: f64,
    u: &GridFunction,
    cfg: &QuadratureConfig,
) -> Result<InterpolationReport> {
    if !(p > 0.0 && p < q) {
        return Err(domain("p", p, "need 0 < p < q"));
    }
    if q > 1.0 {
        return Err(domain("q", q, "need q <= 1"));
    }
    let lhs = op.fractional_power(p, u, cfg)?.sup_norm();
    let gq = op.fractional_power(q, u, cfg)?.sup_norm();
    let theta = p / q;
    let rhs = interpolation_constant(op) * gq.powf(theta) * u.sup_norm().powf(1.0 - theta);
    let holds = lhs <= rhs + 4.0 * cfg.tail_tol * u.sup_norm();
    Ok(InterpolationReport { lhs, rhs, holds })
}
