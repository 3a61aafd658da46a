//! Co-coercivity (COCO) gradient denoising for stochastic first-order
//! optimization.
//!
//! * [`denoiser`]: joint maximum-likelihood estimation of noisy gradients
//!   under pairwise co-coercivity constraints, with a closed form for two
//!   points and a fast dual proximal gradient solver for more.
//! * [`oracles`]: exact and noisy gradient oracles for quadratics and
//!   regularized logistic regression, plus a libsvm reader.
//! * [`optim`]: SGD, Adam, STRSAGA and Polyak-Ruppert averaging, and the
//!   sliding-window wrapper that denoises their gradient stream.
//! * [`mc`]: Monte-Carlo estimators and the closed-form predictions they are
//!   checked against.
//!
//! The numerical kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod blocks;
pub mod denoiser;
pub mod error;
pub mod linalg;
pub mod mc;
pub mod optim;
pub mod oracles;
pub mod scalar;

pub use blocks::Blocks;
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type QuerySet64 = denoiser::QuerySet<f64>;
pub type DualProblem64 = denoiser::DualProblem<f64>;
pub type DenoiseResult64 = denoiser::DenoiseResult<f64>;
pub type SolverConfig64 = denoiser::SolverConfig<f64>;
pub type QuadraticObjective64 = oracles::QuadraticObjective<f64>;
pub type LogisticObjective64 = oracles::LogisticObjective<f64>;
pub type CocoWindow64 = optim::CocoWindow<f64>;
pub type Trajectory64 = optim::Trajectory<f64>;

pub type QuerySet32 = denoiser::QuerySet<f32>;
pub type SolverConfig32 = denoiser::SolverConfig<f32>;
