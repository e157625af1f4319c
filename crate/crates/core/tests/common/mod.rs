#![allow(dead_code)]

pub mod oracles;

use eosio_forensics::attacks::{scan_attacks, AttackInputs, AttackReport, ScanConfig};
use eosio_forensics::botnet::{BotContext, SimilarityThreshold, VectorSpace};
use eosio_forensics::graph::{ActivityIndex, GraphSet};
use eosio_forensics::model::{extract_transfers, Transfer};
use eosio_forensics::synth::SyntheticChain;

/// Graphs and indexes derived from one synthetic chain.
pub struct Built<'a> {
    pub chain: &'a SyntheticChain,
    pub transfers: Vec<Transfer>,
    pub graphs: GraphSet,
    pub activity: ActivityIndex,
    pub space: VectorSpace,
}

impl<'a> Built<'a> {
    pub fn new(chain: &'a SyntheticChain) -> Self {
        let (transfers, _) = extract_transfers(&chain.actions, &chain.window);
        let graphs = GraphSet::build(&chain.actions, &transfers, &chain.snapshot, &chain.window);
        let activity = ActivityIndex::build(&graphs.emfg, &graphs.ecig);
        let space = VectorSpace::new(&graphs.ecig, &chain.window);
        Built { chain, transfers, graphs, activity, space }
    }

    pub fn ctx(&self) -> BotContext<'_> {
        BotContext {
            eacg: &self.graphs.eacg,
            activity: &self.activity,
            space: &self.space,
            snapshot: &self.chain.snapshot,
            registry: &self.chain.registry,
            window: &self.chain.window,
        }
    }

    pub fn attacks(&self, cfg: &ScanConfig) -> AttackReport {
        let log = self.chain.rollback_log();
        let inputs = AttackInputs {
            actions: &self.chain.actions,
            transfers: &self.transfers,
            registry: &self.chain.registry,
            window: &self.chain.window,
            rollback: Some(&log),
        };
        scan_attacks(&inputs, cfg).expect("valid scan config")
    }
}

/// The box [0, 0.33] x [0, 0.18] from a wide bot calibration.
pub fn wide_box() -> SimilarityThreshold {
    SimilarityThreshold { mean_t: 0.09, sd_t: 0.08, mean_s: 0.03, sd_s: 0.05 }
}
