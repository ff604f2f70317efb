//! File formats, commands and the invariance fuzz harness behind the
//! `torsion4` binary.
//!
//! - [`formats`]: JSON triangulations, embeddings, run reports and exported
//!   complexes.
//! - [`lens`]: the lens-space generator.
//! - [`commands`]: one function per subcommand, returning data; printing and
//!   exit codes live in the binary.
//! - [`fuzz`]: random move sequences with replayable traces.

pub mod commands;
pub mod formats;
pub mod fuzz;
pub mod lens;

use thiserror::Error;

use torsion4_core::pseudotriangulation::MoveError;

pub use formats::{EmbeddingFile, Label, RunReport, TriangulationFile};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for a failed check or verification.
pub const EXIT_FAILED: i32 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code when the complex is not acyclic, so no invariant exists.
pub const EXIT_NO_INVARIANT: i32 = 3;
/// Exit code for a move that does not apply.
pub const EXIT_MOVE: i32 = 4;

/// Environment variable capping worker threads (`0` or unset: automatic).
pub const THREADS_ENV: &str = "TORSION4_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] formats::FormatError),
    #[error("{0}")]
    Input(String),
    #[error("no invariant: {0}")]
    NoInvariant(String),
    #[error("move not applicable: {0}")]
    Move(#[from] MoveError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::NoInvariant(_) => EXIT_NO_INVARIANT,
            CliError::Move(_) => EXIT_MOVE,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`]. Later calls are
/// no-ops.
pub fn configure_threads() -> Result<(), CliError> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Input(format!("{THREADS_ENV} must be a non-negative integer, got {s:?}")))?,
        Err(_) => 0,
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Floats for humans: 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}
