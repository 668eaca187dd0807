//! Command-line front end and JSON file formats for `steinx-core`.

mod cli;
pub mod report;
pub mod wire;

pub use cli::run;
