//! Attack detection: fake EOS transfers, fake notices and the staged profit scan.

pub mod bundle;
pub mod config;
pub mod finding;
pub mod profit;
pub mod scan;
pub mod signals;
pub mod unchecked;

pub use bundle::{bundle_name, verify_bundle, write_bundle, MANIFEST};
pub use config::ScanConfig;
pub use finding::{read_findings, sort_findings, write_findings, AttackFinding, AttackKind, Granularity, Ratio};
pub use profit::{liveness_filter, profit_scan, window_bounds, SuspiciousWindow, TransferIndex};
pub use scan::{scan_attacks, AttackInputs, AttackReport};
pub use signals::{auxiliary_signals, DeferredIndex, RollbackEntry, RollbackLog, Signals};
pub use unchecked::{detect_fake_notice, detect_fake_transfer, FakeNoticeScan};
