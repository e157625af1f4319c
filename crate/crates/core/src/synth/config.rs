use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::attacks::AttackKind;
use crate::botnet::BotCategory;
use crate::error::{Error, Result};

/// Behaviour shared by every member of a planted bot community.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BotTemplate {
    /// Bets at a DApp and gets nearly the same amount back.
    ClickFraud,
    /// Hammers an incentive DApp.
    BonusHunter,
    /// Plays the team's own DApp with the DApp's key.
    DappTeam,
    /// Silent accounts sharing one key, one of them a known seller.
    SellerFarm,
    /// Regular claims on a contract outside the registry.
    Other,
}

impl BotTemplate {
    pub fn category(self) -> BotCategory {
        match self {
            BotTemplate::ClickFraud => BotCategory::ClickFraud,
            BotTemplate::BonusHunter => BotCategory::BonusHunter,
            BotTemplate::DappTeam => BotCategory::DappTeam,
            BotTemplate::SellerFarm => BotCategory::AccountSeller,
            BotTemplate::Other => BotCategory::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotCommunitySpec {
    pub size: usize,
    pub template: BotTemplate,
    /// Listed in the registry as a labeled bot community.
    #[serde(default)]
    pub labeled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub kind: AttackKind,
    /// Net EOS taken from the victim, in whole tokens.
    pub profit: u64,
    /// Hours over which the attack is spread.
    #[serde(default = "one")]
    pub duration_hours: u32,
    /// Rollback log entries attributed to the attacker.
    #[serde(default)]
    pub rollback_entries: u32,
    /// Deferred actions issued by the attacker within one hour.
    #[serde(default)]
    pub deferred_burst: u32,
}

fn one() -> u32 {
    1
}

/// One `eosio.code` grant from a user to a contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisuseSpec {
    pub weight: u32,
    pub threshold: u32,
    /// The contract is controlled by the granter's own key.
    #[serde(default)]
    pub shared_key: bool,
    /// A later update removes the grant again.
    #[serde(default)]
    pub revoked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub start_day: NaiveDate,
    pub day_count: u32,
    pub normal_account_count: usize,
    pub service_count: usize,
    /// Inclusive range of children per creation service.
    pub service_children: (usize, usize),
    pub labeled_services: usize,
    pub dapp_count: usize,
    pub incentive_dapp_count: usize,
    pub silent_count: usize,
    pub bot_community_specs: Vec<BotCommunitySpec>,
    pub attack_specs: Vec<AttackSpec>,
    pub misuse_specs: Vec<MisuseSpec>,
    /// Expected peer transfers per normal account per day.
    pub background_transfer_rate: f64,
    /// Share of normal accounts that gamble.
    pub gambler_fraction: f64,
    /// Expected bets per gambler per day.
    pub gambling_rate: f64,
    /// Lengths of planted creation chains hanging off `eosio`.
    pub deep_chains: Vec<usize>,
    /// Fake-token transfers and stray notifications that must not be flagged.
    pub decoys: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 0,
            start_day: NaiveDate::from_ymd_opt(2018, 6, 9).unwrap(),
            day_count: 30,
            normal_account_count: 500,
            service_count: 2,
            service_children: (35, 60),
            labeled_services: 0,
            dapp_count: 4,
            incentive_dapp_count: 1,
            silent_count: 0,
            bot_community_specs: Vec::new(),
            attack_specs: Vec::new(),
            misuse_specs: Vec::new(),
            background_transfer_rate: 0.15,
            gambler_fraction: 0.3,
            gambling_rate: 0.3,
            deep_chains: Vec::new(),
            decoys: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.day_count == 0 {
            return bad("day_count must be positive".into());
        }
        if self.service_children.0 > self.service_children.1 {
            return bad("service_children range is reversed".into());
        }
        if self.labeled_services > self.service_count {
            return bad("more labeled services than services".into());
        }
        for (name, x) in [
            ("background_transfer_rate", self.background_transfer_rate),
            ("gambling_rate", self.gambling_rate),
        ] {
            if !(x.is_finite() && x >= 0.0) {
                return bad(format!("{name} must be a non-negative number"));
            }
        }
        if !(0.0..=1.0).contains(&self.gambler_fraction) {
            return bad("gambler_fraction must lie in [0, 1]".into());
        }
        let needs_dapp = self.bot_community_specs.iter().any(|b| {
            matches!(b.template, BotTemplate::ClickFraud | BotTemplate::DappTeam)
        }) || !self.attack_specs.is_empty()
            || !self.misuse_specs.is_empty();
        if needs_dapp && self.dapp_count == 0 {
            return bad("bots, attacks and misuse grants need at least one DApp".into());
        }
        if self
            .bot_community_specs
            .iter()
            .any(|b| b.template == BotTemplate::BonusHunter)
            && self.incentive_dapp_count == 0
        {
            return bad("bonus hunters need an incentive DApp".into());
        }
        for m in &self.misuse_specs {
            if m.weight == 0 || m.threshold == 0 {
                return bad("misuse grants need positive weight and threshold".into());
            }
        }
        if self.attack_specs.iter().any(|a| a.duration_hours == 0 || a.duration_hours > 24) {
            return bad("attack duration must be 1..=24 hours".into());
        }
        Ok(())
    }

    /// Bot-pipeline scenario: 20 communities of 30..500 accounts, 10 services.
    pub fn bot_benchmark(seed: u64) -> Self {
        let templates = [
            BotTemplate::ClickFraud,
            BotTemplate::BonusHunter,
            BotTemplate::DappTeam,
            BotTemplate::Other,
        ];
        let sizes = [
            30, 500, 45, 120, 60, 250, 35, 80, 400, 40, 150, 55, 300, 70, 33, 200, 90, 38, 180, 65,
        ];
        let bot_community_specs = sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| BotCommunitySpec {
                size,
                template: templates[i % templates.len()],
                labeled: i % 5 < 2,
            })
            .collect();
        ScenarioConfig {
            seed,
            day_count: 28,
            normal_account_count: 3000,
            service_count: 10,
            labeled_services: 5,
            dapp_count: 6,
            incentive_dapp_count: 2,
            bot_community_specs,
            ..Default::default()
        }
    }

    /// Attack scenario: 4 planted attacks of each kind over heavy gambling traffic.
    pub fn attack_benchmark(seed: u64) -> Self {
        let mut attack_specs = Vec::new();
        for (i, kind) in [
            AttackKind::FakeTransfer,
            AttackKind::FakeNotice,
            AttackKind::PredictableState,
        ]
        .into_iter()
        .enumerate()
        {
            for j in 0..4u64 {
                attack_specs.push(AttackSpec {
                    kind,
                    profit: if kind == AttackKind::PredictableState {
                        600 + 450 * j
                    } else {
                        150 + 400 * j + 90 * i as u64
                    },
                    duration_hours: 1 + (j as u32 % 3),
                    rollback_entries: if kind == AttackKind::PredictableState && j == 0 { 250 } else { 0 },
                    deferred_burst: if kind == AttackKind::PredictableState && j == 1 { 1500 } else { 0 },
                });
            }
        }
        ScenarioConfig {
            seed,
            day_count: 30,
            normal_account_count: 4000,
            service_count: 2,
            dapp_count: 8,
            attack_specs,
            gambler_fraction: 0.6,
            gambling_rate: 1.5,
            decoys: 20,
            ..Default::default()
        }
    }

    /// `sequences` updateauth histories, `misuses` of which grant `eosio.code`
    /// to a foreign contract with enough weight; the rest are decoys.
    pub fn permission_benchmark(seed: u64, sequences: usize, misuses: usize) -> Self {
        let misuses = misuses.min(sequences);
        let mut misuse_specs = Vec::with_capacity(sequences);
        for k in 0..misuses {
            let threshold = 1 + (k % 2) as u32;
            misuse_specs.push(MisuseSpec {
                weight: threshold + (k % 3 == 0) as u32,
                threshold,
                shared_key: false,
                revoked: k % 5 == 0,
            });
        }
        for k in 0..sequences - misuses {
            let spec = match k % 4 {
                // weight below threshold
                0 => MisuseSpec { weight: 1, threshold: 2 + (k % 3 == 0) as u32, shared_key: false, revoked: false },
                1 => MisuseSpec { weight: 2, threshold: 3, shared_key: false, revoked: k % 8 == 1 },
                // the granter controls the contract
                2 => MisuseSpec { weight: 1, threshold: 1, shared_key: true, revoked: false },
                _ => MisuseSpec { weight: 2, threshold: 1, shared_key: true, revoked: true },
            };
            misuse_specs.push(spec);
        }
        ScenarioConfig {
            seed,
            day_count: 30,
            normal_account_count: sequences + 50,
            service_count: 0,
            dapp_count: 6,
            misuse_specs,
            background_transfer_rate: 0.05,
            gambling_rate: 0.1,
            ..Default::default()
        }
    }

    /// Background-heavy scenario of roughly `actions` actions.
    pub fn volume(seed: u64, actions: usize) -> Self {
        // about 0.82 actions per account-day from peers, bets, payouts and notices
        let days = 30u32;
        let per_account = 0.82 * f64::from(days);
        ScenarioConfig {
            seed,
            day_count: days,
            normal_account_count: ((actions as f64 / per_account) as usize).max(50),
            service_count: 20,
            dapp_count: 12,
            background_transfer_rate: 0.35,
            gambler_fraction: 0.5,
            gambling_rate: 0.5,
            deep_chains: vec![2000],
            ..Default::default()
        }
    }

    /// Named preset for the command line.
    pub fn preset(name: &str, seed: u64) -> Result<Self> {
        match name {
            "small" => Ok(ScenarioConfig {
                seed,
                bot_community_specs: vec![
                    BotCommunitySpec { size: 40, template: BotTemplate::ClickFraud, labeled: true },
                    BotCommunitySpec { size: 35, template: BotTemplate::BonusHunter, labeled: true },
                    BotCommunitySpec { size: 50, template: BotTemplate::SellerFarm, labeled: false },
                ],
                attack_specs: vec![
                    AttackSpec { kind: AttackKind::FakeTransfer, profit: 120, duration_hours: 1, rollback_entries: 0, deferred_burst: 0 },
                    AttackSpec { kind: AttackKind::FakeNotice, profit: 80, duration_hours: 1, rollback_entries: 0, deferred_burst: 0 },
                    AttackSpec { kind: AttackKind::PredictableState, profit: 900, duration_hours: 2, rollback_entries: 120, deferred_burst: 0 },
                ],
                misuse_specs: vec![
                    MisuseSpec { weight: 1, threshold: 1, shared_key: false, revoked: false },
                    MisuseSpec { weight: 1, threshold: 2, shared_key: false, revoked: false },
                    MisuseSpec { weight: 1, threshold: 1, shared_key: true, revoked: false },
                ],
                silent_count: 20,
                decoys: 5,
                ..Default::default()
            }),
            "bots" => Ok(Self::bot_benchmark(seed)),
            "attacks" => Ok(Self::attack_benchmark(seed)),
            "volume" => Ok(Self::volume(seed, 1_000_000)),
            "permissions" => Ok(Self::permission_benchmark(seed, 1000, 150)),
            "empty" => Ok(ScenarioConfig { seed, ..Default::default() }),
            other => Err(Error::Config(format!(
                "unknown preset {other:?} (expected small, bots, attacks, permissions, volume or empty)"
            ))),
        }
    }
}
