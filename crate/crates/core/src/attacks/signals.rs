//! Auxiliary signals attached to findings for analyst review.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ts_format, AccountName, ActionKind, ActionRecord, Timestamp};

/// Rollback entries naming one account before a note is attached.
pub const ROLLBACK_NOTE_MIN: u64 = 100;
/// Deferred actions by one account within one UTC hour before a note is attached.
pub const CONGESTION_NOTE_MIN: u64 = 1000;

pub const ROLLBACK_NOTE: &str = "analyst review: rollback attack pattern";
pub const CONGESTION_NOTE: &str = "analyst review: deferred-transaction congestion";

/// One off-chain capture of a rolled-back transaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RollbackEntry {
    pub tx_id: String,
    pub actor: AccountName,
    #[serde(with = "ts_format")]
    pub timestamp: Timestamp,
}

#[derive(Debug, Clone, Default)]
pub struct RollbackLog {
    counts: HashMap<AccountName, u64>,
}

impl RollbackLog {
    pub fn from_entries(entries: impl IntoIterator<Item = RollbackEntry>) -> Self {
        let mut counts = HashMap::new();
        for e in entries {
            *counts.entry(e.actor).or_insert(0) += 1;
        }
        RollbackLog { counts }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut entries = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let e: RollbackEntry = serde_json::from_str(&line)
                .map_err(|e| Error::InvalidRecord(format!("{}:{}: {e}", path.display(), i + 1)))?;
            entries.push(e);
        }
        Ok(Self::from_entries(entries))
    }

    pub fn count(&self, account: &str) -> u64 {
        self.counts.get(account).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signals {
    /// `None` when no rollback log was supplied.
    pub rollback_count: Option<u64>,
    pub deferred_count: u64,
    pub max_deferred_per_hour: u64,
    pub notes: Vec<String>,
}

/// Deferred actions per actor: total and busiest UTC hour.
#[derive(Debug, Clone, Default)]
pub struct DeferredIndex {
    per_actor: HashMap<AccountName, (u64, u64)>,
}

impl DeferredIndex {
    pub fn build(actions: &[ActionRecord]) -> Self {
        let mut hours: HashMap<&AccountName, BTreeMap<i64, u64>> = HashMap::new();
        for a in actions.iter().filter(|a| a.kind == ActionKind::Deferred) {
            let hour = a.timestamp.timestamp().div_euclid(3600);
            *hours.entry(&a.actor).or_default().entry(hour).or_insert(0) += 1;
        }
        let per_actor = hours
            .into_iter()
            .map(|(a, h)| {
                let total = h.values().sum();
                let peak = h.values().copied().max().unwrap_or(0);
                (a.clone(), (total, peak))
            })
            .collect();
        DeferredIndex { per_actor }
    }

    pub fn get(&self, account: &str) -> (u64, u64) {
        self.per_actor.get(account).copied().unwrap_or((0, 0))
    }
}

pub fn auxiliary_signals(account: &str, rollback: Option<&RollbackLog>, deferred: &DeferredIndex) -> Signals {
    let rollback_count = rollback.map(|l| l.count(account));
    let (deferred_count, max_deferred_per_hour) = deferred.get(account);
    let mut notes = Vec::new();
    if rollback_count.is_some_and(|c| c >= ROLLBACK_NOTE_MIN) {
        notes.push(ROLLBACK_NOTE.to_string());
    }
    if max_deferred_per_hour >= CONGESTION_NOTE_MIN {
        notes.push(CONGESTION_NOTE.to_string());
    }
    Signals {
        rollback_count,
        deferred_count,
        max_deferred_per_hour,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{name, parse_timestamp};
    use crate::testutil::call_action;

    #[test]
    fn rollback_and_congestion_notes() {
        let ts = parse_timestamp("2018-07-01T00:00:00Z").unwrap();
        let log = RollbackLog::from_entries((0..500).map(|i| RollbackEntry {
            tx_id: format!("{i:x}"),
            actor: name("att"),
            timestamp: ts,
        }));
        let mut acts = Vec::new();
        for i in 0..10_000u64 {
            let mut a = call_action(i, "2018-07-01T05:10:00Z", "spam", "dice", "bet");
            a.kind = ActionKind::Deferred;
            acts.push(a);
        }
        let d = DeferredIndex::build(&acts);
        let s = auxiliary_signals("att", Some(&log), &d);
        assert_eq!(s.rollback_count, Some(500));
        assert_eq!(s.notes, vec![ROLLBACK_NOTE.to_string()]);
        let s = auxiliary_signals("spam", None, &d);
        assert_eq!(s.rollback_count, None);
        assert_eq!(s.deferred_count, 10_000);
        assert_eq!(s.notes, vec![CONGESTION_NOTE.to_string()]);
        let s = auxiliary_signals("nobody", None, &d);
        assert_eq!(s, Signals::default());
    }
}
