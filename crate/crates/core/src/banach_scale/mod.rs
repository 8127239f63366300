//! Grid functions and the operator calculus of the Volterra scale: the
//! running-integral operator `G`, its resolvents and fractional powers,
//! scale-space elements and logarithmically smooth elements.

mod fractional;
mod grid;
mod log_smooth;
mod operator;

pub use fractional::{
    interpolation_check, interpolation_constant, InterpolationReport, QuadratureConfig,
    SmoothElement,
};
pub use grid::GridFunction;
pub use log_smooth::{log_smooth_element, DEFAULT_LAMBDA, GROWTH_BOUND};
pub use operator::ScaleOperator;

pub(crate) use grid::sup_norm;
pub(crate) use operator::check_beta;
