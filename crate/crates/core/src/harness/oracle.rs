//! Reference values that do not go through the scale operator.

use statrs::function::gamma::gamma;

use crate::banach_scale::GridFunction;
use crate::error::{domain, Result};

/// Riemann–Liouville integral `(1/Γ(q)) ∫_0^x (x-ξ)^{q-1} u(ξ) dξ` at every
/// grid point, integrating the singular kernel exactly against the piecewise
/// linear interpolant of `u`. Quadratic cost in the grid size.
pub fn riemann_liouville(q: f64, u: &GridFunction) -> Result<GridFunction> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(domain("q", q, "order must be positive"));
    }
    let h = u.mesh_width();
    let n = u.len();
    let scale = h.powf(q) / gamma(q + 2.0);
    let pw = |k: f64| k.powf(q + 1.0);
    let values = u.values();
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let fi = i as f64;
        let mut acc = (pw(fi - 1.0) - (fi - 1.0 - q) * fi.powf(q)) * values[0];
        for (j, &uj) in values.iter().enumerate().take(i).skip(1) {
            let d = (i - j) as f64;
            acc += (pw(d + 1.0) + pw(d - 1.0) - 2.0 * pw(d)) * uj;
        }
        acc += values[i];
        *slot = scale * acc;
    }
    GridFunction::new(out)
}
