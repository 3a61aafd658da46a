//! Stochastic first-order optimizers and the denoising plug-in that sits
//! between the oracle and the update.

mod adam;
mod coco;
mod runner;
mod sgd;
mod strsaga;

pub use adam::{AdamParams, AdamState};
pub use coco::{CocoWindow, WindowStats};
pub use runner::{
    run_optimizer, run_rng, warmstart_bench, CocoSpec, OptimizerSpec, RunSpec, Trajectory, TrajectoryRecord,
    WarmStartRow,
};
pub use sgd::{pr_average, PrAverage, SgdState, StepSchedule};
pub use strsaga::{StrsagaState, STRSAGA_RHO};
