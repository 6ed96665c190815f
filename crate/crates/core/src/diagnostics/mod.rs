//! Energy, flux and cone diagnostics computed on recorded histories.

pub mod audits;
pub mod ledger;
pub mod null_cone;
pub mod trends;

pub use audits::{flux_audit, virial_audit, AuditReport, Cutoff, VirialReport};
pub use ledger::{EnergyLedger, LedgerRow, LedgerSchedule};
pub use null_cone::{null_cone_energies, ConeSample, FluxRecord, NullConeLedger};
pub use trends::{decay_trends, interior_cone_violation, TrendReport, TrendRow};
