//! Chain data types and file ingestion.

pub mod account;
pub mod action;
pub mod ingest;
pub mod name;
pub mod quantity;
pub mod registry;
pub mod window;

pub use account::{parse_account_snapshot, AccountRecord, Authority, Snapshot};
pub use action::{
    AccountWeight, ActionKind, ActionRecord, KeyWeight, Payload, TransferPayload,
    UpdateAuthPayload, CODE_PERMISSION, SYSTEM_ACCOUNT, TOKEN_CONTRACT,
};
pub use ingest::{
    extract_transfers, parse_action_trace, read_action_trace, write_action_trace, Diagnostic,
    Trace, Transfer, TransferStats,
};
pub use name::{name, AccountName};
pub use quantity::{Amount, Quantity, EOS};
pub use registry::{DappInfo, LabelRole, LabeledCommunity, Registry};
pub use window::{format_timestamp, parse_timestamp, ts_format, ObservationWindow, Timestamp};
