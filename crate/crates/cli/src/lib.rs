//! File formats, verification suites and command implementations behind the
//! `matchgate` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod suites;

pub use commands::{Report, RunConfig};
pub use error::{CliError, CliResult};
pub use formats::{CircuitFile, CompiledFile, JsonFormat};
