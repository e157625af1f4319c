//! Forensics over EOSIO-style action traces.
//!
//! The crate rebuilds three timestamped graphs from a trace and an account
//! snapshot (money flow, account creation, contract invocation), computes
//! network metrics over them, and runs detectors for bot communities,
//! `eosio.code` permission misuse and profit-driven attacks. A seeded
//! generator produces synthetic chains with planted ground truth for every
//! detector.

pub mod attacks;
pub mod botnet;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod model;
pub mod parallel;
pub mod permissions;
pub mod synth;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
