//! Command-line front end: state-set documents, certification reports and
//! the `generate`, `certify` and `inspect` subcommands.

pub mod commands;
pub mod document;
pub mod error;
pub mod layout;
pub mod report;

pub use commands::{run, Cli};
pub use document::StateSetDocument;
pub use error::{exit, CliError};
pub use report::ReportDocument;
