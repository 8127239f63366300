//! The model problem `F(u) = exp(G u)`: forward map, derivative, ground truths
//! for each smoothness regime, noise, and sampled nonlinearity checks.

mod noise;
mod nonlinearity;
mod truth;

pub use noise::{add_noise, NoiseKind, NoiseSpec};
pub use nonlinearity::{nonlinearity_check, Check, NonlinearityReport, NonlinearityRow};
pub use truth::{generic_continuous, make_truth, Regime, TruthSpec};

use crate::banach_scale::{GridFunction, ScaleOperator};
use crate::error::{Error, Result};

/// Largest exponent whose `exp` is finite.
const MAX_EXPONENT: f64 = 709.78;

/// Anything that maps grid functions to grid functions and exposes the
/// transposed derivative, as needed by the Tikhonov solver.
pub trait ForwardModel {
    fn operator(&self) -> &ScaleOperator;

    fn evaluate(&self, u: &GridFunction) -> Result<GridFunction>;

    /// `F'(u)ᵀ w`.
    fn derivative_adjoint(&self, u: &GridFunction, w: &GridFunction) -> Result<GridFunction>;
}

/// `F(u)(x) = exp((G u)(x))` on the whole space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpForward {
    op: ScaleOperator,
}

impl ExpForward {
    pub fn new(op: ScaleOperator) -> Self {
        Self { op }
    }

    /// `F'(u) h = F(u) · G h`.
    pub fn derivative_apply(&self, u: &GridFunction, h: &GridFunction) -> Result<GridFunction> {
        let fu = self.evaluate(u)?;
        fu.zip_with(&self.op.apply(h)?, |f, g| f * g)
    }
}

impl ForwardModel for ExpForward {
    fn operator(&self) -> &ScaleOperator {
        &self.op
    }

    fn evaluate(&self, u: &GridFunction) -> Result<GridFunction> {
        let gu = self.op.apply(u)?;
        exp_checked(gu.values()).map(GridFunction::from_raw)
    }

    fn derivative_adjoint(&self, u: &GridFunction, w: &GridFunction) -> Result<GridFunction> {
        let weighted = self.evaluate(u)?.zip_with(w, |f, w| f * w)?;
        self.op.apply_adjoint(&weighted)
    }
}

pub(crate) fn exp_checked(exponents: &[f64]) -> Result<Vec<f64>> {
    if let Some(&e) = exponents.iter().find(|&&e| e.is_nan() || e > MAX_EXPONENT) {
        return Err(Error::Overflow { exponent: e });
    }
    Ok(exponents.iter().map(|e| e.exp()).collect())
}

/// The model problem with a fixed ground truth `u†` and exact data `f† = F(u†)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpVolterraProblem {
    forward: ExpForward,
    u_true: GridFunction,
    f_true: GridFunction,
    c1: f64,
    c2: f64,
}

impl ExpVolterraProblem {
    /// Degree of ill-posedness of this model.
    pub const ILL_POSEDNESS: f64 = 1.0;

    pub fn new(op: ScaleOperator, u_true: GridFunction) -> Result<Self> {
        let forward = ExpForward::new(op);
        let f_true = forward.evaluate(&u_true)?;
        let c2 = op.apply(&u_true)?.sup_norm().exp();
        Ok(Self {
            forward,
            u_true,
            f_true,
            c1: 1.0 / c2,
            c2,
        })
    }

    pub fn forward_model(&self) -> &ExpForward {
        &self.forward
    }

    pub fn operator(&self) -> &ScaleOperator {
        &self.forward.op
    }

    pub fn u_true(&self) -> &GridFunction {
        &self.u_true
    }

    pub fn f_true(&self) -> &GridFunction {
        &self.f_true
    }

    /// Lower derivative bound `exp(-‖G u†‖)`.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Upper derivative bound `exp(‖G u†‖)`.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn forward(&self, u: &GridFunction) -> Result<GridFunction> {
        self.forward.evaluate(u)
    }

    pub fn derivative_apply(&self, u: &GridFunction, h: &GridFunction) -> Result<GridFunction> {
        self.forward.derivative_apply(u, h)
    }
}
