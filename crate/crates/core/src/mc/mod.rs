//! Monte-Carlo estimators and the closed-form predictions they are checked
//! against. Everything here works in `f64`.

mod accuracy;
pub mod experiments;
mod normal;
mod stats;
mod tightness;

pub use accuracy::{
    bias_estimate, bias_estimate_with, mse_estimate, mse_from_squared_errors, BiasEstimate, MseReport,
    BOOTSTRAP_RESAMPLES,
};
pub use normal::norm_cdf;
pub use stats::{compensated_sum, slope_through_origin, McEstimate};
pub use tightness::{p_active_empirical, p_active_theoretical, p_inactive_theoretical, TightnessQuery};
