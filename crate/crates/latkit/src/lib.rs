//! File formats, code specifications, parallel simulation and the command-line
//! front end for `latkit-core`.

pub mod cli;
pub mod codespec;
pub mod config;
pub mod design;
pub mod error;
pub mod figures;
pub mod formats;
pub mod parallel;

pub use error::{AppError, AppResult};
