use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::action::{AccountWeight, KeyWeight};
use super::name::AccountName;
use super::window::{ts_format, Timestamp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Authority {
    pub threshold: u32,
    #[serde(default)]
    pub key_weights: Vec<KeyWeight>,
    #[serde(default)]
    pub account_weights: Vec<AccountWeight>,
}

impl Authority {
    pub fn single_key(key: &str) -> Self {
        Authority {
            threshold: 1,
            key_weights: vec![KeyWeight {
                key: key.to_string(),
                weight: 1,
            }],
            account_weights: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountRecord {
    pub name: AccountName,
    #[serde(default)]
    pub creator: Option<AccountName>,
    #[serde(with = "ts_format")]
    pub created_at: Timestamp,
    #[serde(default)]
    pub permissions: BTreeMap<String, Authority>,
    /// Whether a contract is deployed on the account.
    #[serde(default)]
    pub contract: bool,
}

impl AccountRecord {
    pub fn active_keys(&self) -> BTreeSet<&str> {
        self.permissions
            .get("active")
            .map(|a| a.key_weights.iter().map(|k| k.key.as_str()).collect())
            .unwrap_or_default()
    }

    /// Keys across every permission of the account.
    pub fn all_keys(&self) -> BTreeSet<&str> {
        self.permissions
            .values()
            .flat_map(|a| a.key_weights.iter().map(|k| k.key.as_str()))
            .collect()
    }
}

/// Account table keyed by name, with creator acyclicity checked.
#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    pub accounts: BTreeMap<AccountName, AccountRecord>,
    pub warnings: Vec<String>,
}

impl Snapshot {
    pub fn from_records(records: impl IntoIterator<Item = AccountRecord>) -> Result<Self> {
        let mut accounts = BTreeMap::new();
        for rec in records {
            let name = rec.name.clone();
            if accounts.insert(name.clone(), rec).is_some() {
                return Err(Error::DuplicateAccount(name.to_string()));
            }
        }
        let mut warnings = Vec::new();
        for rec in accounts.values() {
            let Some(creator) = &rec.creator else { continue };
            match accounts.get(creator) {
                None => warnings.push(format!(
                    "{} names unknown creator {}; treated as a root",
                    rec.name, creator
                )),
                Some(parent) if parent.created_at > rec.created_at => warnings.push(format!(
                    "{} created at {} before its creator {} ({})",
                    rec.name, rec.created_at, creator, parent.created_at
                )),
                Some(_) => {}
            }
        }
        check_acyclic(&accounts)?;
        Ok(Snapshot { accounts, warnings })
    }

    pub fn get(&self, name: &str) -> Option<&AccountRecord> {
        self.accounts.get(name)
    }

    pub fn len(&self) -> usize {
        self.accounts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accounts.is_empty()
    }

    pub fn write_ndjson(&self, w: &mut impl Write) -> std::io::Result<()> {
        for rec in self.accounts.values() {
            serde_json::to_writer(&mut *w, rec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn check_acyclic(accounts: &BTreeMap<AccountName, AccountRecord>) -> Result<()> {
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    for start in accounts.keys() {
        if state.get(start.as_str()).copied().unwrap_or(0) == 2 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = Some(start.as_str());
        while let Some(n) = cur {
            match state.get(n).copied().unwrap_or(0) {
                1 => return Err(Error::CreatorCycle(n.to_string())),
                2 => break,
                _ => {}
            }
            state.insert(n, 1);
            path.push(n);
            cur = accounts
                .get(n)
                .and_then(|r| r.creator.as_ref())
                .filter(|c| accounts.contains_key(c.as_str()))
                .map(|c| c.as_str());
        }
        for n in path {
            state.insert(n, 2);
        }
    }
    Ok(())
}

/// Read a snapshot: one JSON account object per line.
pub fn parse_account_snapshot(path: &Path) -> Result<Snapshot> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: AccountRecord = serde_json::from_str(&line).map_err(|e| {
            Error::InvalidRecord(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?;
        records.push(rec);
    }
    let snap = Snapshot::from_records(records)?;
    for w in &snap.warnings {
        log::warn!("{w}");
    }
    Ok(snap)
}
