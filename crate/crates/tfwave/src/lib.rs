//! File formats, calibration store, experiment runners and the command line
//! built on `tfwave-core`.

pub mod calibration;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;
pub mod report;
pub mod specs;
pub mod suite;
pub mod trajectory;

pub use error::{HarnessError, HarnessResult};
