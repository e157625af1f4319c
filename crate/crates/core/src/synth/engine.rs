//! Event queue with balance tracking.
//!
//! Scenario code schedules events at second offsets from the window start.
//! `run` sorts them by time, replays them against account balances and emits
//! the resulting action records with consecutive sequence numbers.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{
    AccountName, AccountRecord, AccountWeight, ActionKind, ActionRecord, Amount, Authority,
    KeyWeight, ObservationWindow, Payload, Quantity, TransferPayload, UpdateAuthPayload,
    CODE_PERMISSION, EOS, SYSTEM_ACCOUNT, TOKEN_CONTRACT,
};

pub type Id = u32;

#[derive(Debug, Clone)]
pub enum Body {
    Create {
        creator: Id,
        child: Id,
    },
    Transfer {
        from: Id,
        to: Id,
        amount: u64,
        contract: Id,
        symbol: &'static str,
        notify: Vec<Id>,
    },
    Call {
        actor: Id,
        contract: Id,
        action: &'static str,
        kind: ActionKind,
    },
    UpdateAuth {
        account: Id,
        threshold: u32,
        /// `eosio.code` entries as (contract, weight).
        code_grants: Vec<(Id, u32)>,
    },
}

#[derive(Debug, Clone)]
struct Event {
    t: u32,
    id: u32,
    strict: bool,
    after: Option<u32>,
    body: Body,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RunStats {
    pub action_count: u64,
    pub transfer_count: u64,
    #[serde(with = "crate::attacks::finding::eos_quantity")]
    pub transfer_total: Amount,
    pub invocation_count: u64,
    pub notification_count: u64,
    pub skipped_events: u64,
}

pub struct Output {
    pub actions: Vec<ActionRecord>,
    pub records: Vec<AccountRecord>,
    /// First sequence number emitted by each event, 0 when skipped.
    pub seq_of: Vec<u64>,
    pub stats: RunStats,
    /// Accounts that originated at least one action (sent EOS or invoked a contract).
    pub acted: Vec<bool>,
}

pub struct Engine {
    pub window: ObservationWindow,
    names: Vec<AccountName>,
    records: Vec<AccountRecord>,
    keys: Vec<String>,
    roots: Vec<bool>,
    events: Vec<Event>,
    initial: BTreeMap<Id, u64>,
    pub system: Id,
    pub token: Id,
}

fn tx_hash(seq: u64) -> String {
    // splitmix64 finaliser
    let mix = |mut z: u64| {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let a = mix(seq.wrapping_add(0x9e37_79b9_7f4a_7c15));
    format!("{:016x}{:016x}", a, mix(a ^ seq))
}

impl Engine {
    pub fn new(window: ObservationWindow) -> Self {
        let mut e = Engine {
            window,
            names: Vec::new(),
            records: Vec::new(),
            keys: Vec::new(),
            roots: Vec::new(),
            events: Vec::new(),
            initial: BTreeMap::new(),
            system: 0,
            token: 0,
        };
        e.system = e.root(AccountName::new(SYSTEM_ACCOUNT).unwrap(), false);
        e.token = e.account(AccountName::new(TOKEN_CONTRACT).unwrap(), None, true);
        e.initial.insert(e.system, u64::MAX / 4);
        let (system, token) = (e.system, e.token);
        e.create(0, system, token).expect("second zero lies in every window");
        e
    }

    pub fn key_for(name: &AccountName) -> String {
        format!("EOS6{}", name.as_str().to_uppercase())
    }

    /// An account present from the window start without a creator.
    pub fn root(&mut self, name: AccountName, contract: bool) -> Id {
        let id = self.register(name, None, contract);
        self.roots[id as usize] = true;
        id
    }

    /// Register an account that a later `create` event brings into existence.
    /// `key` defaults to one derived from the name.
    pub fn account(&mut self, name: AccountName, key: Option<String>, contract: bool) -> Id {
        self.register(name, key, contract)
    }

    fn register(&mut self, name: AccountName, key: Option<String>, contract: bool) -> Id {
        let key = key.unwrap_or_else(|| Self::key_for(&name));
        let mut permissions = BTreeMap::new();
        permissions.insert("owner".to_string(), Authority::single_key(&key));
        permissions.insert("active".to_string(), Authority::single_key(&key));
        self.records.push(AccountRecord {
            name: name.clone(),
            creator: None,
            created_at: self.window.start(),
            permissions,
            contract,
        });
        self.names.push(name);
        self.keys.push(key);
        self.roots.push(false);
        (self.names.len() - 1) as Id
    }

    pub fn name(&self, id: Id) -> &AccountName {
        &self.names[id as usize]
    }

    pub fn key(&self, id: Id) -> &str {
        &self.keys[id as usize]
    }

    pub fn account_count(&self) -> usize {
        self.names.len()
    }

    pub fn horizon(&self) -> u32 {
        self.window.day_count() * 86_400
    }

    /// Balance held before the first event.
    pub fn endow(&mut self, id: Id, units: u64) {
        *self.initial.entry(id).or_insert(0) += units;
    }

    pub fn push(&mut self, t: u32, body: Body, strict: bool, after: Option<u32>) -> Result<u32> {
        if t >= self.horizon() {
            return Err(Error::Generation(format!("event at second {t} falls outside the window")));
        }
        if let Some(a) = after {
            if self.events[a as usize].t > t {
                return Err(Error::Generation("event scheduled before its dependency".into()));
            }
        }
        let id = self.events.len() as u32;
        self.events.push(Event { t, id, strict, after, body });
        Ok(id)
    }

    pub fn create(&mut self, t: u32, creator: Id, child: Id) -> Result<u32> {
        self.push(t, Body::Create { creator, child }, true, None)
    }

    pub fn transfer(&mut self, t: u32, from: Id, to: Id, amount: u64, strict: bool, after: Option<u32>) -> Result<u32> {
        let token = self.token;
        self.push(
            t,
            Body::Transfer { from, to, amount, contract: token, symbol: EOS, notify: Vec::new() },
            strict,
            after,
        )
    }

    pub fn call(&mut self, t: u32, actor: Id, contract: Id, action: &'static str, strict: bool) -> Result<u32> {
        self.push(t, Body::Call { actor, contract, action, kind: ActionKind::External }, strict, None)
    }

    pub fn run(mut self) -> Result<Output> {
        let n = self.names.len();
        let mut balance = vec![0u64; n];
        for (&id, &u) in &self.initial {
            balance[id as usize] = u;
        }
        let mut created = self.roots.clone();
        let mut created_by: Vec<Option<Id>> = vec![None; n];
        let mut acted = vec![false; n];
        let mut seq_of = vec![0u64; self.events.len()];
        let mut executed = vec![false; self.events.len()];
        let mut actions = Vec::with_capacity(self.events.len() * 3 / 2);
        let mut stats = RunStats::default();
        let start = self.window.start();

        let mut order: Vec<(u32, u32)> = self.events.iter().map(|e| (e.t, e.id)).collect();
        order.sort_unstable();
        let events = std::mem::take(&mut self.events);
        let names = &self.names;
        let nm = |id: Id| names[id as usize].clone();

        for (_, eid) in order {
            let ev = &events[eid as usize];
            let fail = |why: String| -> Result<bool> {
                if ev.strict {
                    Err(Error::Generation(why))
                } else {
                    Ok(false)
                }
            };
            let dep_ok = ev.after.is_none_or(|a| executed[a as usize]);
            let ok = if !dep_ok {
                fail(format!("event {eid} depends on a skipped event"))?
            } else {
                match &ev.body {
                    Body::Create { creator, child } => {
                        if !created[*creator as usize] {
                            fail(format!("{} creates before it exists", nm(*creator)))?
                        } else if created[*child as usize] {
                            fail(format!("{} created twice", nm(*child)))?
                        } else {
                            true
                        }
                    }
                    Body::Transfer { from, to, amount, contract, symbol, .. } => {
                        let genuine = *contract == self.token && *symbol == EOS;
                        if !created[*from as usize] || !created[*to as usize] {
                            fail(format!("transfer {} -> {} before both exist", nm(*from), nm(*to)))?
                        } else if genuine && balance[*from as usize] < *amount {
                            fail(format!(
                                "{} cannot pay {} (balance {})",
                                nm(*from),
                                Amount(*amount),
                                Amount(balance[*from as usize])
                            ))?
                        } else {
                            true
                        }
                    }
                    Body::Call { actor, contract, .. } => {
                        if !created[*actor as usize] || !created[*contract as usize] {
                            fail(format!("{} calls {} before both exist", nm(*actor), nm(*contract)))?
                        } else {
                            true
                        }
                    }
                    Body::UpdateAuth { account, code_grants, .. } => {
                        if !created[*account as usize] || code_grants.iter().any(|g| !created[g.0 as usize]) {
                            fail(format!("updateauth on {} before its parties exist", nm(*account)))?
                        } else {
                            true
                        }
                    }
                }
            };
            if !ok {
                stats.skipped_events += 1;
                continue;
            }
            executed[eid as usize] = true;
            let origin = match &ev.body {
                Body::Create { creator, .. } => *creator,
                Body::Transfer { from, .. } => *from,
                Body::Call { actor, .. } => *actor,
                Body::UpdateAuth { account, .. } => *account,
            };
            acted[origin as usize] = true;

            let seq = stats.action_count + 1;
            seq_of[eid as usize] = seq;
            let tx_id = tx_hash(seq);
            let timestamp = start + chrono::Duration::seconds(i64::from(ev.t));
            let mut emit = |contract: AccountName, action: &str, actor: AccountName, notified: Option<AccountName>, kind: ActionKind, payload: Payload| {
                stats.action_count += 1;
                if kind == ActionKind::Notification {
                    stats.notification_count += 1;
                } else {
                    stats.invocation_count += 1;
                }
                actions.push(ActionRecord {
                    global_seq: stats.action_count,
                    tx_id: tx_id.clone(),
                    timestamp,
                    executing_contract: contract,
                    action_name: action.to_string(),
                    actor,
                    notified,
                    kind,
                    payload,
                });
            };

            match &ev.body {
                Body::Create { creator, child } => {
                    created[*child as usize] = true;
                    created_by[*child as usize] = Some(*creator);
                    self.records[*child as usize].created_at = timestamp;
                    emit(
                        nm(self.system),
                        "newaccount",
                        nm(*creator),
                        None,
                        ActionKind::External,
                        Payload::Other(json!({"creator": nm(*creator), "name": nm(*child)})),
                    );
                }
                Body::Transfer { from, to, amount, contract, symbol, notify } => {
                    let genuine = *contract == self.token && *symbol == EOS;
                    if genuine {
                        balance[*from as usize] -= amount;
                        balance[*to as usize] += amount;
                        if from != to {
                            stats.transfer_count += 1;
                            stats.transfer_total += Amount(*amount);
                        }
                    }
                    let payload = TransferPayload {
                        from: nm(*from),
                        to: nm(*to),
                        quantity: Quantity::new(Amount(*amount), symbol)?,
                        memo: String::new(),
                    };
                    emit(nm(*contract), "transfer", nm(*from), None, ActionKind::External, Payload::Transfer(payload.clone()));
                    for &r in notify {
                        emit(
                            nm(*contract),
                            "transfer",
                            nm(*from),
                            Some(nm(r)),
                            ActionKind::Notification,
                            Payload::Transfer(payload.clone()),
                        );
                    }
                }
                Body::Call { actor, contract, action, kind } => {
                    emit(nm(*contract), action, nm(*actor), None, *kind, Payload::Other(serde_json::Value::Null));
                }
                Body::UpdateAuth { account, threshold, code_grants } => {
                    let mut account_weights: Vec<AccountWeight> = code_grants
                        .iter()
                        .map(|&(c, w)| AccountWeight { actor: nm(c), permission: CODE_PERMISSION.into(), weight: w })
                        .collect();
                    account_weights.sort_by(|a, b| a.actor.cmp(&b.actor));
                    let key_weights = vec![KeyWeight { key: self.keys[*account as usize].clone(), weight: *threshold }];
                    self.records[*account as usize].permissions.insert(
                        "active".into(),
                        Authority { threshold: *threshold, key_weights: key_weights.clone(), account_weights: account_weights.clone() },
                    );
                    emit(
                        nm(self.system),
                        "updateauth",
                        nm(*account),
                        None,
                        ActionKind::External,
                        Payload::UpdateAuth(UpdateAuthPayload {
                            account: nm(*account),
                            permission: "active".into(),
                            parent: "owner".into(),
                            threshold: *threshold,
                            key_weights,
                            account_weights,
                        }),
                    );
                }
            }
        }

        let mut records = self.records;
        for (i, r) in records.iter_mut().enumerate() {
            r.creator = created_by[i].map(nm);
        }
        let missing: Vec<&AccountName> = (0..n).filter(|&i| !created[i]).map(|i| &names[i]).collect();
        if let Some(m) = missing.first() {
            return Err(Error::Generation(format!("account {m} is never created ({} in total)", missing.len())));
        }
        Ok(Output { actions, records, seq_of, stats, acted })
    }
}
