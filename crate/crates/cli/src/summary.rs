//! Stage summaries. Each stage writes one of these as JSON; `report` reads them back.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const INGEST_JSON: &str = "ingest.json";
pub const GRAPHS_JSON: &str = "graphs.json";
pub const METRICS_JSON: &str = "metrics.json";
pub const BOTS_JSON: &str = "bots.json";
pub const CLASSIFY_JSON: &str = "classify.json";
pub const PERMS_JSON: &str = "perms.json";
pub const ATTACKS_JSON: &str = "attacks.json";
pub const FINDINGS_NDJSON: &str = "findings.ndjson";
pub const RUN_CONFIG_JSON: &str = "run_config.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub actions: usize,
    pub outside_window: usize,
    pub malformed_lines: usize,
    pub accounts: usize,
    pub snapshot_warnings: usize,
    pub transfers: usize,
    pub notifications: usize,
    pub unofficial_contract: usize,
    pub non_eos_symbol: usize,
    pub self_transfers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub emfg_nodes: usize,
    pub emfg_edges: usize,
    pub emfg_transfers: u64,
    pub emfg_total_eos: String,
    pub eacg_nodes: usize,
    pub eacg_edges: usize,
    pub eacg_roots: usize,
    pub eacg_max_depth: u32,
    pub eacg_is_forest: bool,
    pub ecig_nodes: usize,
    pub ecig_edges: usize,
    pub ecig_invocations: u64,
    pub ecig_contracts: usize,
    pub silent_accounts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotSummary {
    pub shortlist: usize,
    pub scored_communities: usize,
    pub flagged_communities: usize,
    pub merged_communities: usize,
    pub bot_accounts: usize,
    pub by_source: BTreeMap<String, usize>,
    pub categories: BTreeMap<String, usize>,
    /// Flagged controllers with their bot counts.
    pub communities: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GranteeRow {
    pub permission: String,
    pub grantee: String,
    pub granters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermSummary {
    pub updateauth_actions: usize,
    pub grant_actions: usize,
    pub misuse_actions: usize,
    pub partial_actions: usize,
    pub benign_actions: usize,
    pub misuse_pairs: usize,
    pub misuse_granters: usize,
    pub active_grants: usize,
    pub top_grantees: Vec<GranteeRow>,
    pub warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSummary {
    pub findings: usize,
    pub by_kind: BTreeMap<String, usize>,
    pub attackers: usize,
    pub victims: usize,
    pub suspicious_windows: usize,
    pub fake_notice_insufficient_data: bool,
    pub diagnostics: usize,
}
