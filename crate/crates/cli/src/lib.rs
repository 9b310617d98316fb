//! File formats, the `biaswalk` command line and the verification suites
//! built on `biaswalk-core`.

mod commands;
pub mod io;
pub mod oracle;
pub mod verify;

pub use commands::{execute, run, CliError};
