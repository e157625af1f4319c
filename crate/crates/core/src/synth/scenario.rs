//! Populations, behaviour templates and planted incidents.

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Pareto, Poisson};

use super::config::{AttackSpec, BotCommunitySpec, BotTemplate, MisuseSpec, ScenarioConfig};
use super::engine::{Body, Engine, Id, Output};
use super::manifest::{AttackTruth, ChainTruth, CommunityTruth, GrantTruth, GroundTruth, ServiceTruth};
use super::SyntheticChain;
use crate::attacks::{AttackKind, RollbackEntry};
use crate::error::{Error, Result};
use crate::model::{
    AccountName, ActionKind, Amount, DappInfo, LabeledCommunity, ObservationWindow, Registry,
    Snapshot, EOS,
};
use crate::permissions::Severity;

const DAY: u32 = 86_400;
const HOUR: u32 = 3_600;
const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz12345";
const DAPP_BANKROLL: u64 = 300_000;

/// `prefix` followed by `i` in base 31 over the name alphabet.
pub fn label(prefix: &str, mut i: usize) -> AccountName {
    let mut digits = Vec::new();
    loop {
        digits.push(ALPHABET[i % 31]);
        i /= 31;
        if i == 0 {
            break;
        }
    }
    digits.reverse();
    let s = format!("{prefix}{}", String::from_utf8(digits).expect("ascii"));
    AccountName::new(s).expect("generated names are valid")
}

fn units(tokens: f64) -> u64 {
    (tokens * 10_000.0).round().max(1.0) as u64
}

struct Normal {
    id: Id,
    created: u32,
    weight: f64,
    gambler: bool,
    favorite: usize,
}

struct Builder<'c> {
    cfg: &'c ScenarioConfig,
    rng: ChaCha8Rng,
    eng: Engine,
    registry: Registry,
    rollback: Vec<RollbackEntry>,
    planted_silent: Vec<Id>,
    services: Vec<(Id, Vec<Id>, bool)>,
    communities: Vec<(Id, BotCommunitySpec, Vec<Id>)>,
    attacks: Vec<(AttackKind, Id, Id, u64, u32)>,
    grants: Vec<(Id, Id, MisuseSpec, u32)>,
    chains: Vec<(Id, Id, usize)>,
    dapps: Vec<Id>,
    incentives: Vec<Id>,
    utils: Vec<Id>,
    exchanges: Vec<Id>,
    normals: Vec<Normal>,
    farm_names: usize,
    bot_names: usize,
    clock: u32,
}

impl<'c> Builder<'c> {
    fn days(&self) -> u32 {
        self.cfg.day_count
    }

    fn horizon(&self) -> u32 {
        self.eng.horizon()
    }

    /// Next free second on day 0 for infrastructure set-up.
    fn tick(&mut self) -> u32 {
        self.clock += 1;
        self.clock
    }

    fn new_account(&mut self, name: AccountName, creator: Id, t: u32, key: Option<String>, contract: bool) -> Result<(Id, u32)> {
        let id = self.eng.account(name, key, contract);
        let ev = self.eng.create(t, creator, id)?;
        Ok((id, ev))
    }

    fn infrastructure(&mut self) -> Result<()> {
        let sys = self.eng.system;
        let null = self.eng.root(AccountName::new("eosio.null").unwrap(), false);
        let _ = null;
        if !self.cfg.attack_specs.is_empty() {
            for i in 0..2 {
                let t = self.tick();
                let (id, ev) = self.new_account(label("exch", i), sys, t, None, false)?;
                let t = self.tick();
                self.eng.transfer(t, sys, id, units(5_000_000.0), true, Some(ev))?;
                self.exchanges.push(id);
            }
        }
        for i in 0..self.cfg.dapp_count {
            let t = self.tick();
            let (id, ev) = self.new_account(label("dapp", i), sys, t, None, true)?;
            let t = self.tick();
            self.eng.transfer(t, sys, id, units(DAPP_BANKROLL as f64), true, Some(ev))?;
            self.registry.dapp_accounts.insert(
                self.eng.name(id).clone(),
                DappInfo { dapp: format!("Dice {i}"), category: "gambling".into() },
            );
            self.dapps.push(id);
        }
        for i in 0..self.cfg.incentive_dapp_count {
            let t = self.tick();
            let (id, _) = self.new_account(label("incv", i), sys, t, None, true)?;
            let name = self.eng.name(id).clone();
            self.registry
                .dapp_accounts
                .insert(name.clone(), DappInfo { dapp: format!("Miner {i}"), category: "mining".into() });
            self.registry.incentive_dapps.insert(name);
            self.incentives.push(id);
        }
        for i in 0..3 {
            let t = self.tick();
            let (id, _) = self.new_account(label("util", i), sys, t, None, true)?;
            self.utils.push(id);
        }
        Ok(())
    }

    fn fund_amount(&mut self) -> u64 {
        let d = LogNormal::new(150f64.ln(), 0.8).expect("valid lognormal");
        units(d.sample(&mut self.rng).clamp(5.0, 20_000.0))
    }

    fn add_normal(&mut self, id: Id, created: u32) {
        let weight = Pareto::new(1.0f64, 2.0).expect("valid pareto").sample(&mut self.rng) / 2.0;
        let gambler = self.rng.random_bool(self.cfg.gambler_fraction);
        let favorite = if self.dapps.is_empty() { 0 } else { self.rng.random_range(0..self.dapps.len()) };
        self.normals.push(Normal { id, created, weight: weight.min(20.0), gambler, favorite });
    }

    fn users(&mut self) -> Result<()> {
        let sys = self.eng.system;
        let spread = (self.horizon() as f64 * 0.4) as u32;
        for i in 0..self.cfg.normal_account_count {
            let t = 200 + self.rng.random_range(0..spread.max(1));
            let (id, ev) = self.new_account(label("user", i), sys, t, None, false)?;
            let amount = self.fund_amount();
            self.eng.transfer(t + 1, sys, id, amount, true, Some(ev))?;
            self.add_normal(id, t);
        }
        let (lo, hi) = self.cfg.service_children;
        let mut child_no = 0;
        for s in 0..self.cfg.service_count {
            let t = self.tick();
            let (svc, svc_ev) = self.new_account(label("serv", s), sys, t, None, false)?;
            let n = self.rng.random_range(lo..=hi);
            let plan: Vec<(u32, u64)> = (0..n)
                .map(|_| {
                    let day = if self.days() > 2 { self.rng.random_range(1..self.days() - 1) } else { 0 };
                    let t = day * DAY + 300 + self.rng.random_range(0..DAY - 600);
                    (t, self.fund_amount())
                })
                .collect();
            let total: u64 = plan.iter().map(|p| p.1).sum();
            let t = self.tick();
            self.eng.transfer(t, sys, svc, total + units(10.0), true, Some(svc_ev))?;
            let mut children = Vec::new();
            for (t, amount) in plan {
                let (id, ev) = self.new_account(label("kid", child_no), svc, t, None, false)?;
                child_no += 1;
                self.eng.transfer(t + 1, svc, id, amount, true, Some(ev))?;
                self.add_normal(id, t);
                children.push(id);
            }
            let labeled = s < self.cfg.labeled_services;
            if labeled {
                self.registry.labeled_normal_communities.push(LabeledCommunity {
                    controller: self.eng.name(svc).clone(),
                    members: children.iter().map(|&c| self.eng.name(c).clone()).collect(),
                });
            }
            self.services.push((svc, children, labeled));
        }
        Ok(())
    }

    fn chains_and_silent(&mut self) -> Result<()> {
        let sys = self.eng.system;
        for (k, &len) in self.cfg.deep_chains.clone().iter().enumerate() {
            if len == 0 {
                continue;
            }
            let prefix = format!("ch{}", ALPHABET[k % 26] as char);
            let base = 1_000 + 10_000 * k as u32;
            let mut parent = sys;
            let mut root = None;
            for i in 0..len {
                let t = (base + i as u32) % self.horizon();
                let (id, _) = self.new_account(label(&prefix, i), parent, t, None, false)?;
                root.get_or_insert(id);
                parent = id;
            }
            self.chains.push((root.expect("non-empty chain"), parent, len));
        }
        for i in 0..self.cfg.silent_count {
            let t = self.tick();
            let (id, ev) = self.new_account(label("slnt", i), sys, t, None, false)?;
            let t = self.tick();
            self.eng.transfer(t, sys, id, units(1.0), true, Some(ev))?;
            self.planted_silent.push(id);
        }
        Ok(())
    }

    fn bot_communities(&mut self) -> Result<()> {
        let sys = self.eng.system;
        let days = self.days();
        for (c, spec) in self.cfg.bot_community_specs.clone().into_iter().enumerate() {
            let start_day = if days > 2 { self.rng.random_range(0..=(days / 6).min(days - 2)) } else { 0 };
            let base = start_day * DAY + 600 + 10 * c as u32;
            // farm roots above the controller give bots a depth of 3..=5
            let extra = self.rng.random_range(1..=3);
            let mut parent = sys;
            for k in 0..extra {
                let name = label("farm", self.farm_names);
                self.farm_names += 1;
                let (id, _) = self.new_account(name, parent, base - (extra - k) * 60, None, false)?;
                parent = id;
            }
            let (ctrl, _) = self.new_account(label("ctrl", c), parent, base, None, false)?;

            let x = self.rng.random_range(1.0..5.0);
            let (fund, key) = match spec.template {
                BotTemplate::ClickFraud => (units(x * 25.0), Some(format!("EOS6BOTKEY{c}"))),
                BotTemplate::BonusHunter => (units(5.0), Some(format!("EOS6BOTKEY{c}"))),
                BotTemplate::DappTeam => {
                    let team = self.dapps[c % self.dapps.len()];
                    (units(30.0), Some(self.eng.key(team).to_string()))
                }
                BotTemplate::SellerFarm => (units(1.0), Some(format!("EOS6FARMKEY{c}"))),
                BotTemplate::Other => (units(1.0), Some(format!("EOS6BOTKEY{c}"))),
            };
            self.eng.transfer(base + 1, sys, ctrl, fund * spec.size as u64 + units(10.0), true, None)?;
            let mut members = Vec::with_capacity(spec.size);
            for i in 0..spec.size {
                let t = base + 60 + 7 * i as u32;
                let name = label("botx", self.bot_names);
                self.bot_names += 1;
                let (id, ev) = self.new_account(name, ctrl, t, key.clone(), false)?;
                self.eng.transfer(t + 1, ctrl, id, fund, true, Some(ev))?;
                members.push(id);
            }

            match spec.template {
                BotTemplate::SellerFarm => {
                    self.registry.seller_seed.insert(self.eng.name(members[0]).clone());
                }
                template => {
                    let target = match template {
                        BotTemplate::ClickFraud => self.dapps[c % self.dapps.len()],
                        BotTemplate::BonusHunter => self.incentives[c % self.incentives.len()],
                        BotTemplate::DappTeam => self.dapps[c % self.dapps.len()],
                        _ => {
                            let t = self.tick();
                            self.new_account(label("drop", c), sys, t, None, true)?.0
                        }
                    };
                    // skip rates are stratified over the community index so any
                    // evenly spread subset covers the whole range
                    let n = self.cfg.bot_community_specs.len() as f64;
                    let rank = ((c * 7) % self.cfg.bot_community_specs.len()) as f64;
                    let skip = 0.03 + 0.15 * (rank + self.rng.random_range(0.0..1.0)) / n;
                    let rank = ((c * 11 + 3) % self.cfg.bot_community_specs.len()) as f64;
                    let noise = 0.3 * (rank + self.rng.random_range(0.0..1.0)) / n;
                    self.bot_behaviour(template, &members, target, start_day, x, (skip, noise))?;
                }
            }
            if spec.labeled {
                self.registry.labeled_bot_communities.push(LabeledCommunity {
                    controller: self.eng.name(ctrl).clone(),
                    members: members.iter().map(|&m| self.eng.name(m).clone()).collect(),
                });
            }
            self.communities.push((ctrl, spec, members));
        }
        Ok(())
    }

    /// Shared schedule: four slots three hours apart on most days; each member
    /// skips whole days at a community-specific rate.
    fn bot_behaviour(&mut self, template: BotTemplate, members: &[Id], target: Id, start_day: u32, x: f64, (skip, noise): (f64, f64)) -> Result<()> {
        let token = self.eng.token;
        let h0 = self.rng.random_range(0..3u32);
        for d in start_day + 1..self.days() {
            if !self.rng.random_bool(0.9) {
                continue;
            }
            for &m in members {
                if self.rng.random_bool(skip) {
                    continue;
                }
                for k in 0..4u32 {
                    let t = d * DAY + (h0 + 3 * k) * HOUR + self.rng.random_range(0..900);
                    match template {
                        BotTemplate::ClickFraud => {
                            let bet = units(x * self.rng.random_range(0.9..1.1));
                            let ev = self.eng.push(
                                t,
                                Body::Transfer { from: m, to: target, amount: bet, contract: token, symbol: EOS, notify: vec![target] },
                                false,
                                None,
                            )?;
                            let back = (bet as f64 * self.rng.random_range(0.97..1.0)) as u64;
                            self.eng.transfer(t + 2, target, m, back.max(1), false, Some(ev))?;
                        }
                        BotTemplate::BonusHunter => {
                            self.eng.call(t, m, target, "mine", false)?;
                            if k == 0 {
                                self.eng.push(
                                    t + 1,
                                    Body::Transfer { from: m, to: target, amount: units(0.1), contract: token, symbol: EOS, notify: vec![target] },
                                    false,
                                    None,
                                )?;
                            }
                        }
                        BotTemplate::DappTeam => {
                            self.eng.call(t, m, target, "play", false)?;
                            if k == 0 {
                                let ev = self.eng.push(
                                    t + 1,
                                    Body::Transfer { from: m, to: target, amount: units(0.5), contract: token, symbol: EOS, notify: vec![target] },
                                    false,
                                    None,
                                )?;
                                if self.rng.random_bool(0.5) {
                                    self.eng.transfer(t + 3, target, m, units(0.95), false, Some(ev))?;
                                }
                            }
                        }
                        BotTemplate::Other | BotTemplate::SellerFarm => {
                            self.eng.call(t, m, target, "claim", false)?;
                        }
                    }
                }
                if self.rng.random_bool(noise) {
                    let u = self.utils[self.rng.random_range(0..self.utils.len())];
                    let t = d * DAY + 22 * HOUR + self.rng.random_range(0..1800);
                    self.eng.call(t, m, u, "vote", false)?;
                }
            }
        }
        Ok(())
    }

    fn attacks(&mut self) -> Result<()> {
        if self.cfg.attack_specs.is_empty() {
            return Ok(());
        }
        let days = self.days();
        if days < 6 {
            return Err(Error::Generation("attacks need a window of at least 6 days".into()));
        }
        let sys = self.eng.system;
        let token = self.eng.token;
        for (i, spec) in self.cfg.attack_specs.clone().into_iter().enumerate() {
            let AttackSpec { kind, profit, duration_hours, rollback_entries, deferred_burst } = spec;
            let victim = self.dapps[i % self.dapps.len()];
            if profit >= DAPP_BANKROLL {
                return Err(Error::Generation(format!(
                    "attack {i} takes {profit} EOS but victim {} holds {DAPP_BANKROLL} EOS",
                    self.eng.name(victim)
                )));
            }
            let p = units(profit as f64);
            let day = 2 + ((i as u32 * 7) + self.rng.random_range(0..3)) % (days - 4);
            let hour = self.rng.random_range(1..=24 - duration_hours.max(1));
            let at = day * DAY + hour * HOUR;
            let prep = (day - 1) * DAY + self.rng.random_range(HOUR..20 * HOUR);
            let exch = self.exchanges[i % self.exchanges.len()];
            let (atk, ev) = self.new_account(label("atkr", i), sys, prep, None, false)?;

            match kind {
                AttackKind::PredictableState => {
                    let stake = (p / 20).max(units(5.0));
                    self.eng.transfer(prep + 60, exch, atk, stake + units(1.0), true, Some(ev))?;
                    let n = 3 + (i as u64 % 3);
                    let (bet, pay) = (stake / n, (stake + p) / n);
                    for j in 0..n {
                        let last = j + 1 == n;
                        let amount = if last { stake - bet * (n - 1) } else { bet };
                        let payout = if last { stake + p - pay * (n - 1) } else { pay };
                        let t = at + (j as u32 % duration_hours) * HOUR + 60 * j as u32 + self.rng.random_range(0..30);
                        let b = self.eng.push(
                            t,
                            Body::Transfer { from: atk, to: victim, amount, contract: token, symbol: EOS, notify: vec![victim] },
                            true,
                            None,
                        )?;
                        self.eng.transfer(t + 5, victim, atk, payout, true, Some(b))?;
                    }
                    let out = (day + 1) * DAY + self.rng.random_range(0..DAY - 10);
                    self.eng.transfer(out, atk, exch, stake + p, true, None)?;
                    for k in 0..deferred_burst {
                        let t = at + (k as u64 * u64::from(HOUR) / u64::from(deferred_burst)) as u32;
                        self.eng.push(
                            t,
                            Body::Call { actor: atk, contract: victim, action: "play", kind: ActionKind::Deferred },
                            true,
                            None,
                        )?;
                    }
                    let ts = self.eng.window.start() + chrono::Duration::seconds(i64::from(at));
                    for k in 0..rollback_entries {
                        let tx_id = format!("{:016x}{:016x}", self.rng.random::<u64>(), self.rng.random::<u64>());
                        self.rollback.push(RollbackEntry {
                            tx_id,
                            actor: self.eng.name(atk).clone(),
                            timestamp: ts + chrono::Duration::seconds(i64::from(k)),
                        });
                    }
                }
                AttackKind::FakeTransfer => {
                    self.eng.transfer(prep + 60, exch, atk, units(2.0), true, Some(ev))?;
                    let (fake, _) = self.new_account(label("ftkn", i), atk, prep + 120, None, true)?;
                    let f = self.eng.push(
                        at,
                        Body::Transfer { from: atk, to: victim, amount: p, contract: fake, symbol: EOS, notify: vec![victim] },
                        true,
                        None,
                    )?;
                    self.eng.transfer(at + 3, victim, atk, p, true, Some(f))?;
                }
                AttackKind::FakeNotice => {
                    self.eng.transfer(prep + 60, exch, atk, units(3.0), true, Some(ev))?;
                    let (helper, _) = self.new_account(label("acmp", i), atk, prep + 120, None, false)?;
                    let f = self.eng.push(
                        at,
                        Body::Transfer { from: atk, to: helper, amount: units(1.0), contract: token, symbol: EOS, notify: vec![helper, victim] },
                        true,
                        None,
                    )?;
                    self.eng.transfer(at + 3, victim, atk, p, true, Some(f))?;
                }
            }
            self.attacks.push((kind, atk, victim, p, day));
        }
        Ok(())
    }

    fn grants(&mut self) -> Result<()> {
        if self.cfg.misuse_specs.len() > self.normals.len() {
            return Err(Error::Generation(format!(
                "{} grant sequences need as many normal accounts, only {} planned",
                self.cfg.misuse_specs.len(),
                self.normals.len()
            )));
        }
        let horizon = self.horizon();
        for (k, spec) in self.cfg.misuse_specs.clone().into_iter().enumerate() {
            let (granter, created) = (self.normals[k].id, self.normals[k].created);
            let lo = created + HOUR;
            let span = horizon.saturating_sub(lo + 2 * HOUR).max(4);
            let mut times: Vec<u32> = (0..4).map(|_| lo + self.rng.random_range(0..span)).collect();
            times.sort_unstable();
            let grantee = if spec.shared_key {
                let key = self.eng.key(granter).to_string();
                self.new_account(label("mown", k), granter, times[0], Some(key), true)?.0
            } else {
                self.dapps[k % self.dapps.len()]
            };
            if self.rng.random_bool(0.5) {
                self.eng.push(times[1], Body::UpdateAuth { account: granter, threshold: 1, code_grants: Vec::new() }, true, None)?;
            }
            let ev = self.eng.push(
                times[2] + 1,
                Body::UpdateAuth { account: granter, threshold: spec.threshold, code_grants: vec![(grantee, spec.weight)] },
                true,
                None,
            )?;
            if spec.revoked {
                self.eng.push(times[3] + 2, Body::UpdateAuth { account: granter, threshold: 1, code_grants: Vec::new() }, true, None)?;
            }
            self.grants.push((granter, grantee, spec, ev));
        }
        Ok(())
    }

    fn decoys(&mut self) -> Result<()> {
        if self.cfg.decoys == 0 || self.dapps.is_empty() {
            return Ok(());
        }
        let token = self.eng.token;
        let calm: Vec<(Id, u32)> = self.normals.iter().filter(|n| !n.gambler).map(|n| (n.id, n.created)).collect();
        if calm.len() < 2 {
            return Ok(());
        }
        let horizon = self.horizon();
        for j in 0..self.cfg.decoys {
            let (user, created) = calm[self.rng.random_range(0..calm.len())];
            let dapp = self.dapps[j % self.dapps.len()];
            let t = created + HOUR + self.rng.random_range(0..horizon.saturating_sub(created + 2 * HOUR).max(1));
            match j % 3 {
                0 | 1 => {
                    let (fake, _) = self.new_account(label("ftkd", j), user, t - 60, None, true)?;
                    let symbol = if j % 3 == 0 { "EOSS" } else { EOS };
                    let f = self.eng.push(
                        t,
                        Body::Transfer { from: user, to: dapp, amount: units(5.0), contract: fake, symbol, notify: vec![dapp] },
                        true,
                        None,
                    )?;
                    if j % 3 == 0 {
                        self.eng.transfer(t + 3, dapp, user, units(1.0), true, Some(f))?;
                    }
                }
                _ => {
                    let peer = loop {
                        let p = calm[self.rng.random_range(0..calm.len())].0;
                        if p != user {
                            break p;
                        }
                    };
                    self.eng.push(
                        t,
                        Body::Transfer { from: user, to: peer, amount: units(0.5), contract: token, symbol: EOS, notify: vec![peer, dapp] },
                        false,
                        None,
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Heavy-tailed peer transfers, gambling and utility calls.
    fn background(&mut self) -> Result<()> {
        if self.normals.is_empty() {
            return Ok(());
        }
        let token = self.eng.token;
        let horizon = self.horizon();
        let popularity: Vec<f64> = (0..self.normals.len())
            .map(|_| Pareto::new(1.0f64, 1.2).expect("valid pareto").sample(&mut self.rng).min(1_000.0))
            .collect();
        let pick_peer = WeightedIndex::new(&popularity).map_err(|e| Error::Generation(e.to_string()))?;
        let amount_peer = LogNormal::new(3f64.ln(), 1.2).expect("valid lognormal");
        let amount_bet = LogNormal::new(2f64.ln(), 0.9).expect("valid lognormal");
        for u in 0..self.normals.len() {
            let (id, created, weight, gambler, favorite) = {
                let n = &self.normals[u];
                (n.id, n.created, n.weight, n.gambler, n.favorite)
            };
            // one guaranteed action so that no ordinary user is silent
            let t = created + 60 + self.rng.random_range(0..(horizon - created - 60).min(DAY));
            let util = self.utils[self.rng.random_range(0..self.utils.len())];
            self.eng.call(t, id, util, "vote", true)?;

            let peer_rate = self.cfg.background_transfer_rate * weight;
            let bet_rate = if gambler && !self.dapps.is_empty() { self.cfg.gambling_rate * weight } else { 0.0 };
            for d in created / DAY..self.days() {
                let lo = (d * DAY).max(created + 60);
                let hi = (d + 1) * DAY - 10;
                if lo >= hi {
                    continue;
                }
                for _ in 0..poisson(&mut self.rng, peer_rate) {
                    let peer = self.normals[pick_peer.sample(&mut self.rng)].id;
                    if peer == id {
                        continue;
                    }
                    let t = self.rng.random_range(lo..hi);
                    let a = units(amount_peer.sample(&mut self.rng).clamp(0.01, 200.0));
                    self.eng.transfer(t, id, peer, a, false, None)?;
                }
                for _ in 0..poisson(&mut self.rng, bet_rate) {
                    let dapp = if self.rng.random_bool(0.8) {
                        self.dapps[favorite]
                    } else {
                        self.dapps[self.rng.random_range(0..self.dapps.len())]
                    };
                    let t = self.rng.random_range(lo..hi);
                    let bet = units(amount_bet.sample(&mut self.rng).clamp(0.1, 50.0));
                    let ev = self.eng.push(
                        t,
                        Body::Transfer { from: id, to: dapp, amount: bet, contract: token, symbol: EOS, notify: vec![dapp] },
                        false,
                        None,
                    )?;
                    if self.rng.random_bool(0.48) {
                        self.eng.transfer(t + 2, dapp, id, bet * 2, false, Some(ev))?;
                    }
                }
                if self.rng.random_bool((0.03 * weight).min(1.0)) {
                    let util = self.utils[self.rng.random_range(0..self.utils.len())];
                    let t = self.rng.random_range(lo..hi);
                    self.eng.call(t, id, util, "stake", false)?;
                }
            }
        }
        Ok(())
    }
}

fn poisson(rng: &mut ChaCha8Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda).map(|p| p.sample(rng) as u64).unwrap_or(0)
}

/// Build a synthetic chain from `cfg`. Identical configs give identical chains.
pub fn generate(cfg: &ScenarioConfig) -> Result<SyntheticChain> {
    cfg.validate()?;
    let window = ObservationWindow::with_days(cfg.start_day, cfg.day_count)?;
    let mut b = Builder {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        eng: Engine::new(window),
        registry: Registry::default(),
        rollback: Vec::new(),
        planted_silent: Vec::new(),
        services: Vec::new(),
        communities: Vec::new(),
        attacks: Vec::new(),
        grants: Vec::new(),
        chains: Vec::new(),
        dapps: Vec::new(),
        incentives: Vec::new(),
        utils: Vec::new(),
        exchanges: Vec::new(),
        normals: Vec::new(),
        farm_names: 0,
        bot_names: 0,
        clock: 0,
    };
    b.infrastructure()?;
    b.users()?;
    b.chains_and_silent()?;
    b.bot_communities()?;
    b.attacks()?;
    b.grants()?;
    b.decoys()?;
    b.background()?;

    let Builder { eng, registry, rollback, planted_silent, services, communities, attacks, grants, chains, .. } = b;
    let names: Vec<AccountName> = (0..eng.account_count() as Id).map(|i| eng.name(i).clone()).collect();
    let Output { actions, records, seq_of, stats, acted } = eng.run()?;
    let nm = |id: Id| names[id as usize].clone();

    let truth = GroundTruth {
        seed: cfg.seed,
        window,
        stats,
        silent: {
            let mut s: Vec<AccountName> = (0..names.len()).filter(|&i| !acted[i]).map(|i| names[i].clone()).collect();
            s.sort();
            s
        },
        planted_silent: planted_silent.iter().map(|&i| nm(i)).collect(),
        services: services
            .into_iter()
            .map(|(svc, kids, labeled)| ServiceTruth { controller: nm(svc), labeled, children: kids.into_iter().map(nm).collect() })
            .collect(),
        bot_communities: communities
            .into_iter()
            .map(|(ctrl, spec, members)| CommunityTruth {
                controller: nm(ctrl),
                template: spec.template,
                category: spec.template.category(),
                labeled: spec.labeled,
                members: members.into_iter().map(nm).collect(),
            })
            .collect(),
        attacks: attacks
            .into_iter()
            .map(|(kind, atk, victim, p, day)| AttackTruth { kind, attacker: nm(atk), victim: nm(victim), profit: Amount(p), day })
            .collect(),
        grants: grants
            .into_iter()
            .map(|(granter, grantee, spec, ev)| GrantTruth {
                granter: nm(granter),
                grantee: nm(grantee),
                weight: spec.weight,
                threshold: spec.threshold,
                expected: if spec.shared_key {
                    Severity::Benign
                } else if spec.weight >= spec.threshold {
                    Severity::Misuse
                } else {
                    Severity::Partial
                },
                revoked: spec.revoked,
                action_seq: seq_of[ev as usize],
            })
            .collect(),
        chains: chains.into_iter().map(|(r, t, len)| ChainTruth { root: nm(r), tip: nm(t), length: len }).collect(),
    };
    let snapshot = Snapshot::from_records(records)?;
    Ok(SyntheticChain { config: cfg.clone(), window, actions, snapshot, registry, rollback, truth })
}
