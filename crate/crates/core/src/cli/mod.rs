//! Command-line front end: configuration, expression parsing, pipelines
//! and the run manifest.

pub mod config;
pub mod expr;
pub mod manifest;
pub mod run;

pub use config::{Command, FamilyKind, RunConfig};
pub use expr::Expr;
pub use manifest::{sha256_hex, ArtifactEntry, Check, Manifest, Suite, MANIFEST_NAME, SCHEMA_VERSION};
pub use run::{run, Outcome};

use crate::error::Error;

/// Exit status for a library error: 2 when a numerical procedure failed on
/// valid input, 1 for usage and I/O problems.
pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Newton { .. } | Error::Linear(_) | Error::Precondition(_) => 2,
        _ => 1,
    }
}
