//! Tikhonov regularization of nonlinear ill-posed problems with oversmoothing
//! penalties, on a discretized Volterra scale.
//!
//! The penalty is the norm of `X_1 = range(G)` for the running-integral
//! operator `G`, while the truth may be only Hölder or logarithmically smooth.
//! The crate provides the operator calculus ([`banach_scale`]), iterated
//! Lavrentiev regularizers ([`lavrentiev`]), the model problem
//! `F(u) = exp(G u)` ([`exp_volterra`]), a certified minimizer ([`tikhonov`])
//! and an experiment runner ([`harness`]).
//!
//! ```
//! use oversmooth::harness::{run_rate_study, ExperimentConfig};
//!
//! let config = ExperimentConfig {
//!     grid_n: 64,
//!     deltas: vec![1e-1, 1e-2, 1e-3],
//!     confirm_grid_n: 0,
//!     ..ExperimentConfig::default()
//! };
//! let report = run_rate_study(&config)?;
//! assert_eq!(report.rows.len(), 3);
//! # Ok::<(), oversmooth::error::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module with runnable examples.

pub mod banach_scale;
pub mod error;
pub mod exp_volterra;
pub mod fit;
pub mod harness;
pub mod lavrentiev;
pub mod tikhonov;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scale.md")]
    mod scale {}
    #[doc = include_str!("../../../book/src/log_smooth.md")]
    mod log_smooth {}
    #[doc = include_str!("../../../book/src/lavrentiev.md")]
    mod lavrentiev {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/tikhonov.md")]
    mod tikhonov {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
