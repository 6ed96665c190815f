//! Experiment harness: configs, initial data, bundles, sweeps and the
//! `run` / `sweep` / `analyze` / `verify` drivers.

pub mod analyze;
pub mod bundle;
pub mod config;
pub mod initial;
pub mod run;
pub mod sweep;
pub mod verify;

pub use analyze::analyze;
pub use bundle::{read_bundle, write_bundle, Manifest, StoredBundle};
pub use config::{default_output_root, RunConfig, OUTPUT_ROOT_ENV};
pub use initial::{make_initial_data, InitialData, PreparedData};
pub use run::{diagnose, execute, exit_code, exit_code_for_error, run, RunArtifacts, RunDiagnostics, RunSummary};
pub use sweep::{sweep, SweepAxis, SweepMember};
pub use verify::{verify, Check, VerifyReport, VerifyTolerances};
