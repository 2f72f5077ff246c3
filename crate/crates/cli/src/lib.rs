//! Command-line reproductions of the determinacy examples, with versioned
//! JSON reports.

pub mod commands;
pub mod error;
pub mod report;

pub use error::CliError;
pub use report::RunReport;
