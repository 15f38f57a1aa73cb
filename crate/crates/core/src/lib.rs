//! Production functions as time-independent invariants of exponential growth.
//!
//! Labor, capital and output series are fitted to the diagonal system
//! `dL/dt = b1 L`, `dK/dt = b2 K`, `dY/dt = b3 Y` by log-linear least
//! squares ([`fit`]). Eliminating time from the closed-form trajectories
//! ([`model`]) yields production functions `Y = f(L, K)` that hold along every
//! trajectory ([`invariants`]): two power-law fundamental invariants, the
//! one-parameter Cobb-Douglas family with its constant-returns member, the
//! generalized CES family and, when labor and capital grow at the same rate,
//! the textbook CES function.
//!
//! All math is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix it to `f64`.
//!
//! ```
//! use prodfn_core::{cobb_douglas_member, constancy_check, crs_elasticities, parse_model, to_model};
//!
//! let spec = parse_model::<f64>(
//!     "var L = 106.65; dL/dt = 0.02549605 * L; role labor L;
//!      var K = 100.70; dK/dt = 0.06472564 * K; role capital K;
//!      var Y = 106.08; dY/dt = 0.03592651 * Y; role output Y;",
//! )?;
//! let model = to_model(&spec)?;
//! let crs = crs_elasticities(&model)?;
//! let cd = cobb_douglas_member(&model, crs.alpha)?;
//! let grid: Vec<f64> = (0..=24).map(f64::from).collect();
//! assert!(constancy_check(&cd.into(), &model, &grid) < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod error;
pub mod fit;
pub mod function;
pub mod ingest;
pub mod invariants;
pub mod model;
pub mod modelspec;
mod scalar;

pub use error::{Degeneracy, MathError, ReductionFailure, Variable};
pub use fit::{fit_log_linear, fit_log_linear_from, fit_system, FitError};
pub use function::{evaluate, Input};
pub use ingest::{load_series, normalize_base100, render_series_csv, IngestError, Schema};
pub use invariants::{
    ces_like_member, ces_reduction, cobb_douglas_member, constancy_check, constancy_profile,
    crs_elasticities, default_share, fundamental_invariant_capital, fundamental_invariant_labor,
    identity_chain_check,
};
pub use model::trajectory;
pub use modelspec::{parse_model, to_model, ParseError, ParseErrorKind, Position, Role};
pub use scalar::Scalar;

pub type ExponentialModel = model::ExponentialModel<f64>;
pub type State = model::State<f64>;
pub type ProductionFunction = function::ProductionFunction<f64>;
pub type PowerLaw = function::PowerLaw<f64>;
pub type CobbDouglas = function::CobbDouglas<f64>;
pub type GeneralizedCes = function::GeneralizedCes<f64>;
pub type Ces = function::Ces<f64>;
pub type TimeSeries = ingest::TimeSeries<f64>;
pub type FitDiagnostics = fit::FitDiagnostics<f64>;
pub type LogLinearFit = fit::LogLinearFit<f64>;
pub type SystemFit = fit::SystemFit<f64>;
pub type Warning = invariants::Warning<f64>;
pub type Elasticities = invariants::Elasticities<f64>;
pub type CesReduction = invariants::CesReduction<f64>;
pub type ConstancyPoint = invariants::ConstancyPoint<f64>;
pub type ModelSpec = modelspec::ModelSpec<f64>;
pub type VariableSpec = modelspec::VariableSpec<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type ExponentialModel = crate::model::ExponentialModel<f32>;
    pub type ProductionFunction = crate::function::ProductionFunction<f32>;
    pub type TimeSeries = crate::ingest::TimeSeries<f32>;
    pub type ModelSpec = crate::modelspec::ModelSpec<f32>;
}
