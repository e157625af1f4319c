//! The three enhanced graphs and the structural facts derived from them.

pub mod activity;
pub mod analysis;
pub mod digraph;
pub mod eacg;
pub mod ecig;
pub mod emfg;
pub mod export;

pub use activity::{AccountActivity, ActivityIndex, DayActivity, PairFlow};
pub use analysis::{degree_histogram, power_law_alpha, silent_accounts, DegreeHistogram};
pub use digraph::{synthetic_label, Digraph, Direction};
pub use eacg::Eacg;
pub use ecig::{is_invocation, Ecig};
pub use emfg::{DayFlow, Emfg};

use crate::model::{ActionRecord, ObservationWindow, Snapshot, Transfer};

/// All three graphs built from one ingested dataset.
#[derive(Debug, Clone)]
pub struct GraphSet {
    pub emfg: Emfg,
    pub eacg: Eacg,
    pub ecig: Ecig,
}

impl GraphSet {
    pub fn build(
        actions: &[ActionRecord],
        transfers: &[Transfer],
        snapshot: &Snapshot,
        window: &ObservationWindow,
    ) -> Self {
        GraphSet {
            emfg: Emfg::build(transfers),
            eacg: Eacg::build(snapshot, window),
            ecig: Ecig::build(actions, window),
        }
    }
}
