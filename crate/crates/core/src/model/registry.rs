//! Off-chain annotations: DApp ownership, incentive programs, labeled
//! communities and known name sellers.
//!
//! On disk a registry is a directory of CSV files, each optional:
//!
//! | file             | header                         |
//! |------------------|--------------------------------|
//! | `dapps.csv`      | `account,dapp,category`        |
//! | `incentives.csv` | `account`                      |
//! | `labels.csv`     | `community_id,role,account`    |
//! | `sellers.csv`    | `account`                      |
//!
//! In `labels.csv` the `community_id` is the controller account of the
//! community and `role` is `bot` or `normal`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::name::AccountName;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DappInfo {
    pub dapp: String,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCommunity {
    pub controller: AccountName,
    pub members: BTreeSet<AccountName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelRole {
    Bot,
    Normal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    pub dapp_accounts: BTreeMap<AccountName, DappInfo>,
    pub incentive_dapps: BTreeSet<AccountName>,
    pub labeled_bot_communities: Vec<LabeledCommunity>,
    pub labeled_normal_communities: Vec<LabeledCommunity>,
    pub seller_seed: BTreeSet<AccountName>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DappRow {
    account: AccountName,
    dapp: String,
    category: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AccountRow {
    account: AccountName,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    community_id: AccountName,
    role: LabelRole,
    account: AccountName,
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    rdr.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::csv(path, e))
}

fn write_rows<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

impl Registry {
    pub fn is_dapp(&self, account: &str) -> bool {
        self.dapp_accounts.contains_key(account)
    }

    /// All labeled accounts mapped to their role.
    pub fn labels(&self) -> BTreeMap<&AccountName, LabelRole> {
        let mut out = BTreeMap::new();
        for c in &self.labeled_normal_communities {
            for m in &c.members {
                out.insert(m, LabelRole::Normal);
            }
        }
        for c in &self.labeled_bot_communities {
            for m in &c.members {
                out.insert(m, LabelRole::Bot);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bots: BTreeSet<&AccountName> = self
            .labeled_bot_communities
            .iter()
            .flat_map(|c| c.members.iter())
            .collect();
        if let Some(dup) = self
            .labeled_normal_communities
            .iter()
            .flat_map(|c| c.members.iter())
            .find(|m| bots.contains(m))
        {
            return Err(Error::InvalidRecord(format!(
                "account {dup} is labeled both bot and normal"
            )));
        }
        Ok(())
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut reg = Registry::default();
        for row in read_rows::<DappRow>(&dir.join("dapps.csv"))? {
            reg.dapp_accounts.insert(
                row.account,
                DappInfo {
                    dapp: row.dapp,
                    category: row.category,
                },
            );
        }
        reg.incentive_dapps = read_rows::<AccountRow>(&dir.join("incentives.csv"))?
            .into_iter()
            .map(|r| r.account)
            .collect();
        reg.seller_seed = read_rows::<AccountRow>(&dir.join("sellers.csv"))?
            .into_iter()
            .map(|r| r.account)
            .collect();
        let mut bots: BTreeMap<AccountName, BTreeSet<AccountName>> = BTreeMap::new();
        let mut normals: BTreeMap<AccountName, BTreeSet<AccountName>> = BTreeMap::new();
        for row in read_rows::<LabelRow>(&dir.join("labels.csv"))? {
            let target = match row.role {
                LabelRole::Bot => &mut bots,
                LabelRole::Normal => &mut normals,
            };
            target.entry(row.community_id).or_default().insert(row.account);
        }
        let collect = |m: BTreeMap<AccountName, BTreeSet<AccountName>>| {
            m.into_iter()
                .map(|(controller, members)| LabeledCommunity { controller, members })
                .collect()
        };
        reg.labeled_bot_communities = collect(bots);
        reg.labeled_normal_communities = collect(normals);
        reg.validate()?;
        Ok(reg)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let dapps: Vec<DappRow> = self
            .dapp_accounts
            .iter()
            .map(|(a, i)| DappRow {
                account: a.clone(),
                dapp: i.dapp.clone(),
                category: i.category.clone(),
            })
            .collect();
        write_rows(&dir.join("dapps.csv"), &["account", "dapp", "category"], &dapps)?;
        let accounts = |s: &BTreeSet<AccountName>| -> Vec<AccountRow> {
            s.iter().map(|a| AccountRow { account: a.clone() }).collect()
        };
        write_rows(&dir.join("incentives.csv"), &["account"], &accounts(&self.incentive_dapps))?;
        write_rows(&dir.join("sellers.csv"), &["account"], &accounts(&self.seller_seed))?;
        let mut labels = Vec::new();
        for (role, comms) in [
            (LabelRole::Bot, &self.labeled_bot_communities),
            (LabelRole::Normal, &self.labeled_normal_communities),
        ] {
            for c in comms {
                for m in &c.members {
                    labels.push(LabelRow {
                        community_id: c.controller.clone(),
                        role,
                        account: m.clone(),
                    });
                }
            }
        }
        write_rows(&dir.join("labels.csv"), &["community_id", "role", "account"], &labels)
    }
}
