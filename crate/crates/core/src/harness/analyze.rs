use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::bundle::{read_bundle, write_diagnostics};
use super::run::{concentration_from, diagnose, RunDiagnostics};

pub const ANALYSIS_DIR: &str = "analysis";

/// Re-runs diagnostics and decomposition on the snapshots stored in a bundle
/// and writes the results to `<bundle>/analysis/`.
pub fn analyze(dir: &Path) -> Result<RunDiagnostics> {
    let bundle = read_bundle(dir)?;
    if bundle.history.is_empty() {
        return Err(Error::InvalidState(format!("{} stores no fields", dir.display())));
    }
    let data = bundle.config.prepare()?;
    let concentration = concentration_from(&bundle.history);
    let diagnostics = diagnose(&bundle.config, &data, &bundle.history, bundle.summary.verdict, &concentration)?;
    let out = dir.join(ANALYSIS_DIR);
    if out.exists() {
        fs::remove_dir_all(&out)?;
    }
    fs::create_dir_all(&out)?;
    if let Err(e) = write_diagnostics(&out, &diagnostics) {
        let _ = fs::remove_dir_all(&out);
        return Err(e);
    }
    Ok(diagnostics)
}
