//! `eosio.code` permission audit over `updateauth` history.
//!
//! Granting `eosio.code` of a contract to one's own `active` or `owner`
//! authority lets that contract act for the account. A grant is a misuse
//! when the contract belongs to someone else (no shared public key) and its
//! weight alone meets the authority threshold.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AccountName, ActionRecord, Diagnostic, ObservationWindow, Snapshot, CODE_PERMISSION, SYSTEM_ACCOUNT};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermissionGrant {
    pub granter: AccountName,
    pub grantee: AccountName,
    pub grantee_permission: String,
    pub linked_permission: String,
    pub weight: u32,
    pub threshold: u32,
    /// Day relative to the window start (negative before it).
    pub day: i64,
    pub action_seq: u64,
}

#[derive(Debug, Clone, Default)]
pub struct UpdateAuthScan {
    pub updateauth_count: usize,
    /// Every `eosio.code` grant in sequence order.
    pub history: Vec<PermissionGrant>,
    /// Grants still in force after replay, keyed by (granter, linked permission).
    pub active: BTreeMap<(AccountName, String), Vec<PermissionGrant>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl UpdateAuthScan {
    pub fn active_grants(&self) -> impl Iterator<Item = &PermissionGrant> {
        self.active.values().flatten()
    }
}

fn is_updateauth(a: &ActionRecord) -> bool {
    a.action_name == "updateauth" && a.executing_contract == SYSTEM_ACCOUNT && !a.is_notification()
}

/// Replay `updateauth` actions in sequence order. Each update replaces the
/// whole authority of `(account, permission)`, so a later update without the
/// `eosio.code` entry revokes the earlier grant.
pub fn scan_updateauth(actions: &[ActionRecord], window: &ObservationWindow) -> UpdateAuthScan {
    let mut ordered: Vec<&ActionRecord> = actions.iter().filter(|a| is_updateauth(a)).collect();
    ordered.sort_by_key(|a| a.global_seq);
    let mut scan = UpdateAuthScan {
        updateauth_count: ordered.len(),
        ..Default::default()
    };
    for a in ordered {
        let Some(u) = a.update_auth() else {
            scan.diagnostics.push(Diagnostic {
                line: a.global_seq as usize,
                message: format!("updateauth seq {} has a malformed authority payload", a.global_seq),
            });
            continue;
        };
        if let Err(e) = u.validate() {
            scan.diagnostics.push(Diagnostic {
                line: a.global_seq as usize,
                message: format!("seq {}: {e}", a.global_seq),
            });
            continue;
        }
        let grants: Vec<PermissionGrant> = u
            .account_weights
            .iter()
            .filter(|w| w.permission == CODE_PERMISSION)
            .map(|w| PermissionGrant {
                granter: u.account.clone(),
                grantee: w.actor.clone(),
                grantee_permission: w.permission.clone(),
                linked_permission: u.permission.clone(),
                weight: w.weight,
                threshold: u.threshold,
                day: window.day_offset(&a.timestamp),
                action_seq: a.global_seq,
            })
            .collect();
        scan.history.extend(grants.iter().cloned());
        let key = (u.account.clone(), u.permission.clone());
        if grants.is_empty() {
            scan.active.remove(&key);
        } else {
            scan.active.insert(key, grants);
        }
    }
    scan
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Misuse,
    Partial,
    Benign,
}

impl Severity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Severity::Misuse => "misuse",
            Severity::Partial => "partial",
            Severity::Benign => "benign",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisuseFinding {
    pub grant: PermissionGrant,
    /// The grant's weight alone satisfies the threshold.
    pub effective: bool,
    /// Granter and grantee hold no public key in common; `None` when either is
    /// missing from the snapshot.
    pub cross_key: Option<bool>,
    pub severity: Severity,
}

/// Classify grants. Keys are compared over every permission of each account.
pub fn detect_misuse(grants: &[PermissionGrant], snapshot: &Snapshot) -> (Vec<MisuseFinding>, Vec<String>) {
    let mut warnings = Vec::new();
    let findings = grants
        .iter()
        .map(|g| {
            let effective = g.weight >= g.threshold;
            let cross_key = match (snapshot.get(g.granter.as_str()), snapshot.get(g.grantee.as_str())) {
                (Some(a), Some(b)) => {
                    let ka = a.all_keys();
                    Some(b.all_keys().iter().all(|k| !ka.contains(k)))
                }
                _ => {
                    warnings.push(format!(
                        "grant seq {}: {} or {} missing from snapshot; key overlap unknown",
                        g.action_seq, g.granter, g.grantee
                    ));
                    None
                }
            };
            let severity = match (cross_key, effective) {
                (Some(true), true) => Severity::Misuse,
                (Some(true), false) | (None, _) => Severity::Partial,
                (Some(false), _) => Severity::Benign,
            };
            MisuseFinding {
                grant: g.clone(),
                effective,
                cross_key,
                severity,
            }
        })
        .collect();
    (findings, warnings)
}

/// Misuse counted per grant action and per distinct (granter, grantee) pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MisuseSummary {
    pub updateauth_actions: usize,
    pub grant_actions: usize,
    pub misuse_actions: usize,
    pub partial_actions: usize,
    pub misuse_pairs: usize,
    pub misuse_granters: usize,
}

pub fn summarize(scan: &UpdateAuthScan, findings: &[MisuseFinding]) -> MisuseSummary {
    let misuse: Vec<&MisuseFinding> = findings.iter().filter(|f| f.severity == Severity::Misuse).collect();
    let pairs: BTreeSet<(&AccountName, &AccountName)> =
        misuse.iter().map(|f| (&f.grant.granter, &f.grant.grantee)).collect();
    let granters: BTreeSet<&AccountName> = misuse.iter().map(|f| &f.grant.granter).collect();
    MisuseSummary {
        updateauth_actions: scan.updateauth_count,
        grant_actions: findings.len(),
        misuse_actions: misuse.len(),
        partial_actions: findings.iter().filter(|f| f.severity == Severity::Partial).count(),
        misuse_pairs: pairs.len(),
        misuse_granters: granters.len(),
    }
}

/// Grantees ranked by the number of distinct accounts that granted them
/// `eosio.code` with misuse severity, per linked permission.
pub fn top_grantees(findings: &[MisuseFinding], k: usize) -> Vec<(String, AccountName, usize)> {
    let mut m: BTreeMap<(String, AccountName), BTreeSet<&AccountName>> = BTreeMap::new();
    for f in findings.iter().filter(|f| f.severity == Severity::Misuse) {
        m.entry((f.grant.linked_permission.clone(), f.grant.grantee.clone()))
            .or_default()
            .insert(&f.grant.granter);
    }
    let mut v: Vec<_> = m.into_iter().map(|((p, g), s)| (p, g, s.len())).collect();
    v.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)).then_with(|| a.1.cmp(&b.1)));
    v.truncate(k);
    v
}

pub fn write_findings_csv(findings: &[MisuseFinding], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let err = |e| Error::csv("<findings>", e);
    out.write_record(["granter", "grantee", "linked_permission", "weight", "threshold", "severity", "action_seq"])
        .map_err(err)?;
    for f in findings {
        let g = &f.grant;
        out.write_record([
            g.granter.as_str(),
            g.grantee.as_str(),
            &g.linked_permission,
            &g.weight.to_string(),
            &g.threshold.to_string(),
            f.severity.as_str(),
            &g.action_seq.to_string(),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::io("<findings>", e))
}
