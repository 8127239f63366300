use serde::{Deserialize, Serialize};

use crate::banach_scale::{
    log_smooth_element, GridFunction, QuadratureConfig, ScaleOperator, DEFAULT_LAMBDA,
};
use crate::error::{domain, Result};

/// Smoothness class of the ground truth, which also selects the a priori rule
/// for the regularization parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum Regime {
    /// Continuous, vanishing at the origin, no rate asserted.
    #[serde(rename = "none")]
    NoSmoothness,
    /// `u† = G^p w` with `0 < p ≤ 1`.
    Hoelder { p: f64 },
    /// `u† ∈ D(log G)`.
    LowOrder,
}

impl Regime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::Hoelder { p } if !(p > 0.0 && p <= 1.0) => {
                Err(domain("p", p, "Hoelder order must lie in (0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

/// How to build a ground truth.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthSpec {
    pub regime: Regime,
    /// Source element. For the Hölder and low-order regimes this is the witness
    /// `w` (default `1`); for [`Regime::NoSmoothness`] it is the truth itself
    /// (default [`generic_continuous`]).
    pub witness: Option<GridFunction>,
    /// Decay rate of the logarithmically smooth element.
    pub lambda: f64,
}

impl TruthSpec {
    pub fn new(regime: Regime) -> Self {
        Self {
            regime,
            witness: None,
            lambda: DEFAULT_LAMBDA,
        }
    }
}

/// `1 / ln(e/x)`, extended by `0` at `x = 0`: continuous, maximal (`= 1`) at
/// `x = 1`, and smoother than no power of `x`.
pub fn generic_continuous(op: &ScaleOperator) -> Result<GridFunction> {
    op.sample(|x| if x > 0.0 { 1.0 / (1.0 - x.ln()) } else { 0.0 })
}

/// Ground truth for `spec.regime`. With the default witness the Hölder truth
/// is `x^p / Γ(p + 1)` up to discretization.
pub fn make_truth(
    spec: &TruthSpec,
    op: &ScaleOperator,
    cfg: &QuadratureConfig,
) -> Result<GridFunction> {
    spec.regime.validate()?;
    let witness = match &spec.witness {
        Some(w) => {
            w.check_len(op.len())?;
            w.clone()
        }
        None if spec.regime == Regime::NoSmoothness => return generic_continuous(op),
        None => GridFunction::constant(op.len(), 1.0)?,
    };
    match spec.regime {
        Regime::Hoelder { p } => op.fractional_power(p, &witness, cfg),
        Regime::LowOrder => log_smooth_element(op, &witness, spec.lambda, cfg),
        Regime::NoSmoothness => Ok(witness),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoelder_one_is_ramp() {
        let op = ScaleOperator::new(64).unwrap();
        let u = make_truth(
            &TruthSpec::new(Regime::Hoelder { p: 1.0 }),
            &op,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert_eq!(u, op.apply(&op.sample(|_| 1.0).unwrap()).unwrap());
    }

    #[test]
    fn generic_default() {
        let op = ScaleOperator::new(101).unwrap();
        let u = make_truth(
            &TruthSpec::new(Regime::NoSmoothness),
            &op,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert_eq!(u.values()[0], 0.0);
        assert_eq!(u.values()[100], 1.0);
        assert_eq!(u.sup_norm(), 1.0);
    }

    #[test]
    fn invalid_order() {
        let op = ScaleOperator::new(16).unwrap();
        let cfg = QuadratureConfig::default();
        for p in [0.0, 1.5, -0.2] {
            assert!(make_truth(&TruthSpec::new(Regime::Hoelder { p }), &op, &cfg).is_err());
        }
    }

    #[test]
    fn regime_serde_names() {
        let s = serde_json::to_string(&Regime::Hoelder { p: 0.5 }).unwrap();
        assert_eq!(s, r#"{"regime":"hoelder","p":0.5}"#);
        let s = serde_json::to_string(&Regime::NoSmoothness).unwrap();
        assert_eq!(s, r#"{"regime":"none"}"#);
        let r: Regime = serde_json::from_str(r#"{"regime":"low-order"}"#).unwrap();
        assert_eq!(r, Regime::LowOrder);
    }
}
