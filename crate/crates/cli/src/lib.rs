//! Config-driven experiment runner for the `coco` denoiser.

pub mod config;
pub mod run;
pub mod svg;
pub mod table;

pub use config::{ExperimentConfig, ExperimentKind};
pub use run::{run_experiment, RunError};
pub use svg::{emit_svg, PlotSpec};
pub use table::ResultTable;
