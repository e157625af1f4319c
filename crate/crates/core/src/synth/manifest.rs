use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::BotTemplate;
use super::engine::RunStats;
use crate::attacks::finding::eos_quantity;
use crate::attacks::AttackKind;
use crate::botnet::BotCategory;
use crate::model::{AccountName, Amount, ObservationWindow};
use crate::permissions::Severity;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceTruth {
    pub controller: AccountName,
    pub labeled: bool,
    pub children: Vec<AccountName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityTruth {
    pub controller: AccountName,
    pub template: BotTemplate,
    pub category: BotCategory,
    pub labeled: bool,
    pub members: Vec<AccountName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackTruth {
    pub kind: AttackKind,
    pub attacker: AccountName,
    pub victim: AccountName,
    /// Net EOS the attacker receives from the victim on the attack day.
    #[serde(with = "eos_quantity")]
    pub profit: Amount,
    pub day: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrantTruth {
    pub granter: AccountName,
    pub grantee: AccountName,
    pub weight: u32,
    pub threshold: u32,
    pub expected: Severity,
    pub revoked: bool,
    pub action_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTruth {
    pub root: AccountName,
    pub tip: AccountName,
    pub length: usize,
}

/// Everything the generator planted, in the order it was planted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub window: ObservationWindow,
    pub stats: RunStats,
    /// Accounts that never send EOS or invoke a contract, sorted.
    pub silent: Vec<AccountName>,
    /// Idle accounts planted on purpose; a subset of `silent`.
    pub planted_silent: Vec<AccountName>,
    pub services: Vec<ServiceTruth>,
    pub bot_communities: Vec<CommunityTruth>,
    pub attacks: Vec<AttackTruth>,
    pub grants: Vec<GrantTruth>,
    pub chains: Vec<ChainTruth>,
}

impl GroundTruth {
    /// Every planted bot with its expected category.
    pub fn bots(&self) -> BTreeMap<&AccountName, BotCategory> {
        self.bot_communities
            .iter()
            .flat_map(|c| c.members.iter().map(move |m| (m, c.category)))
            .collect()
    }

    pub fn misuse_seqs(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .grants
            .iter()
            .filter(|g| g.expected == Severity::Misuse)
            .map(|g| g.action_seq)
            .collect();
        v.sort_unstable();
        v
    }

    /// True when nothing detectable was planted.
    pub fn is_clean(&self) -> bool {
        self.bot_communities.is_empty() && self.attacks.is_empty() && self.grants.is_empty()
    }
}
