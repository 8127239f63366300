use std::f64::consts::{FRAC_PI_2, PI};

use crate::banach_scale::{GridFunction, QuadratureConfig, ScaleOperator};
use crate::error::{domain, Result};

/// Growth bound `ω` in `‖G^q‖ ≤ C e^{ωq}` used to validate `λ`.
///
/// On this grid `‖G^q‖ ≤ max(1, 1/Γ(q+1)) ≤ 1.14`, so `ω = 0.5` is safe.
pub const GROWTH_BOUND: f64 = 0.5;

/// Default decay rate `λ` for [`log_smooth_element`].
pub const DEFAULT_LAMBDA: f64 = 2.0;

/// `u = ∫_0^∞ e^{-λq} G^q w dq`, an element of `D(log G)` with no Hölder smoothness
/// beyond logarithmic order.
///
/// Splitting `q` into integer and fractional parts gives `u = φ(G) ψ` with
/// `ψ = Σ_k e^{-λk} G^k w` and `φ(z) = ∫_0^1 e^{-λq} z^q dq`. Inserting the
/// Balakrishnan formula and integrating over `q` in closed form gives
///
/// ```text
/// φ(G) y = ∫_ℝ (1 + e^{t-λ}) / ((t-λ)² + π²) · (G + e^t I)⁻¹ G y dt,
/// ```
///
/// evaluated by the trapezoid rule with analytic tails. Cost is one resolvent
/// sweep per node, independent of any truncation in `q`.
pub fn log_smooth_element(
    op: &ScaleOperator,
    w: &GridFunction,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<GridFunction> {
    if !(lambda > GROWTH_BOUND && lambda.is_finite()) {
        return Err(domain("lambda", lambda, "must exceed the growth bound 0.5"));
    }
    cfg.validate()?;
    w.check_len(op.len())?;
    let n = op.len();
    let scale = w.sup_norm();
    if scale == 0.0 {
        return GridFunction::zeros(n);
    }

    // ψ = Σ_k e^{-λk} G^k w
    let mut psi = w.values().to_vec();
    let mut term = psi.clone();
    let mut scratch = vec![0.0; n];
    let decay = (-lambda).exp();
    for _ in 0..512 {
        op.apply_slice(&term, &mut scratch);
        std::mem::swap(&mut term, &mut scratch);
        term.iter_mut().for_each(|t| *t *= decay);
        psi.iter_mut().zip(&term).for_each(|(p, t)| *p += t);
        if super::sup_norm(&term) <= 1e-3 * cfg.tail_tol * scale {
            break;
        }
    }

    let mut gpsi = vec![0.0; n];
    op.apply_slice(&psi, &mut gpsi);

    let margin = -cfg.tail_tol.ln();
    let t_lo = op.mesh_width().ln().min(lambda) - margin;
    let t_hi = lambda.max(0.0) + margin;
    let intervals = ((t_hi - t_lo) / cfg.step).ceil().max(1.0) as usize;
    let dt = (t_hi - t_lo) / intervals as f64;
    let density = |t: f64| {
        let c = t - lambda;
        (1.0 + c.exp()) / (c * c + PI * PI)
    };

    let mut acc = vec![0.0; n];
    for k in 0..=intervals {
        let t = t_lo + k as f64 * dt;
        let mut weight = dt * density(t);
        if k == 0 || k == intervals {
            weight *= 0.5;
        }
        if k == 0 {
            // Resolvent term is flat as t → -∞.
            let c = t_lo - lambda;
            weight += ((c / PI).atan() + FRAC_PI_2) / PI + c.exp() / (c * c + PI * PI);
        }
        if k == intervals {
            // Resolvent term decays like e^{t_hi - t} as t → ∞.
            let c = t_hi - lambda;
            weight += c.exp() * (FRAC_PI_2 - (c / PI).atan()) / PI + 1.0 / (c * c + PI * PI);
        }
        op.resolvent_accumulate(t.exp(), &gpsi, weight, &mut acc);
    }
    GridFunction::from_computed(acc)
}
