//! Benchmark harness: configuration, presets, runs, error norms,
//! convergence tables and CSV output.

pub mod config;
pub mod convergence;
pub mod csv;
pub mod norms;
pub mod presets;
pub mod run;

pub use config::{Problem, RunConfig};
pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use norms::{density_total_variation, error_norms, fine_grid_reference, shock_position};
pub use presets::{Preset, ReferencePolicy};
pub use run::{run, RunOutput};
