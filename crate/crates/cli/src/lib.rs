//! Library side of the `approval-dap` command-line tool: run manifests and
//! subcommand implementations.

pub mod commands;
pub mod manifest;

pub use commands::{CliError, CliResult, EXIT_RUNTIME, EXIT_VALIDATION};
pub use manifest::{load_manifest, parse_manifest, ManifestError, RunManifest};
