//! Category heuristics for flagged bots, applied in fixed order (first match wins).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::community::MergedCommunities;
use crate::graph::ActivityIndex;
use crate::model::{Amount, Registry, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BotCategory {
    BonusHunter,
    ClickFraud,
    DappTeam,
    AccountSeller,
    Other,
    None,
}

impl BotCategory {
    pub const ALL: [BotCategory; 5] = [
        BotCategory::BonusHunter,
        BotCategory::ClickFraud,
        BotCategory::DappTeam,
        BotCategory::AccountSeller,
        BotCategory::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BotCategory::BonusHunter => "bonus_hunter",
            BotCategory::ClickFraud => "click_fraud",
            BotCategory::DappTeam => "dapp_team",
            BotCategory::AccountSeller => "account_seller",
            BotCategory::Other => "other",
            BotCategory::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategorizeConfig {
    /// Minimum `min(in, out) / max(in, out)` with a DApp for click fraud.
    pub click_ratio: f64,
    /// Flows below this total are ignored for click fraud.
    pub click_min_flow: Amount,
    /// Share of invocations on incentive DApps above which an account hunts bonuses.
    pub bonus_fraction: f64,
    /// Merged community size from which invocation-free members count as sold accounts.
    pub seller_min_community: usize,
}

impl Default for CategorizeConfig {
    fn default() -> Self {
        CategorizeConfig {
            click_ratio: 0.95,
            click_min_flow: Amount::from_tokens(10),
            bonus_fraction: 0.5,
            seller_min_community: 10,
        }
    }
}

pub struct Categorizer<'a> {
    snapshot: &'a Snapshot,
    activity: &'a ActivityIndex,
    registry: &'a Registry,
    community_size: HashMap<&'a str, usize>,
    dapp_keys: BTreeSet<&'a str>,
    cfg: CategorizeConfig,
}

impl<'a> Categorizer<'a> {
    pub fn new(
        snapshot: &'a Snapshot,
        activity: &'a ActivityIndex,
        registry: &'a Registry,
        merged: &'a MergedCommunities,
        cfg: CategorizeConfig,
    ) -> Self {
        let dapp_keys = registry
            .dapp_accounts
            .keys()
            .filter_map(|a| snapshot.get(a.as_str()))
            .flat_map(|r| r.active_keys())
            .collect();
        let community_size = merged
            .communities
            .values()
            .flat_map(|m| m.iter().map(move |a| (a.as_str(), m.len())))
            .collect();
        Categorizer { snapshot, activity, registry, community_size, dapp_keys, cfg }
    }

    pub fn categorize(&self, account: &str) -> BotCategory {
        let act = self.activity.get(account);
        let invocations = act.map_or(0, |a| a.invocation_total());

        let shares_dapp_key = self
            .snapshot
            .get(account)
            .is_some_and(|r| r.active_keys().iter().any(|k| self.dapp_keys.contains(k)));
        if shares_dapp_key || self.registry.dapp_accounts.contains_key(account) {
            return BotCategory::DappTeam;
        }

        let community_size = self.community_size.get(account).copied().unwrap_or(0);
        if self.registry.seller_seed.contains(account)
            || (community_size >= self.cfg.seller_min_community && invocations == 0)
        {
            return BotCategory::AccountSeller;
        }

        let Some(act) = act else {
            return BotCategory::Other;
        };
        if invocations > 0 {
            let incentive: u64 = act
                .contracts
                .iter()
                .filter(|(c, _)| self.registry.incentive_dapps.contains(*c))
                .map(|(_, &n)| n)
                .sum();
            if incentive as f64 / invocations as f64 > self.cfg.bonus_fraction {
                return BotCategory::BonusHunter;
            }
        }

        for (peer, flow) in &act.counterparties {
            if !self.registry.is_dapp(peer.as_str()) {
                continue;
            }
            if flow.received + flow.sent < self.cfg.click_min_flow {
                continue;
            }
            let (lo, hi) = if flow.received < flow.sent {
                (flow.received, flow.sent)
            } else {
                (flow.sent, flow.received)
            };
            if hi > Amount::ZERO && lo.0 as f64 / hi.0 as f64 >= self.cfg.click_ratio {
                return BotCategory::ClickFraud;
            }
        }
        BotCategory::Other
    }
}
