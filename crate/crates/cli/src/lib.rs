//! Trajectories, parameter sweeps, figure data and self-verification for the
//! two-atom cavity model, with CSV output.

pub mod angle;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod trajectory;
pub mod verify;

pub use config::{RunConfig, Sweep, SweepParameter};
pub use error::{CliError, Result};
pub use output::{read_blocks, write_blocks, Block};
pub use presets::{figure_preset, PresetCurve};
pub use trajectory::{run_sweep, run_trajectory, TrajectoryRecord};
pub use verify::{verify, Battery, VerifyOptions, VerifyReport};
