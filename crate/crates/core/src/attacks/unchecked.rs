//! Unchecked-input attacks: fake EOS transfers and fake notices.
//!
//! Both are corroborated by same-day profit: on the UTC day of the fake
//! action, genuine EOS paid by the DApp to the attacker must exceed what the
//! attacker paid the DApp.

use std::collections::{BTreeMap, BTreeSet};

use super::finding::{AttackFinding, AttackKind, Ratio};
use super::profit::TransferIndex;
use crate::model::{AccountName, ActionRecord, Amount, ObservationWindow, Registry, TOKEN_CONTRACT};

/// Whether `account` counts as a DApp. With an empty registry every account does.
fn is_target(registry: &Registry, account: &str) -> bool {
    registry.dapp_accounts.is_empty() || registry.is_dapp(account)
}

/// Net same-day inflow from `dapp` to `attacker`, with the supporting transfers.
fn same_day_profit(
    index: &TransferIndex<'_>,
    attacker: &AccountName,
    dapp: &AccountName,
    day: u32,
) -> Option<(Amount, Ratio, Vec<u64>)> {
    let flows: Vec<_> = index
        .of(attacker.as_str())
        .iter()
        .filter(|t| t.day == day && (&t.from == dapp || &t.to == dapp))
        .collect();
    let received: Amount = flows.iter().filter(|t| &t.to == attacker).map(|t| t.amount).sum();
    let sent: Amount = flows.iter().filter(|t| &t.from == attacker).map(|t| t.amount).sum();
    (received > sent).then(|| {
        let mut seqs: Vec<u64> = flows.iter().map(|t| t.seq).collect();
        seqs.sort_unstable();
        (Amount(received.0 - sent.0), Ratio::of(received, sent), seqs)
    })
}

fn findings_from(
    kind: AttackKind,
    suspects: BTreeMap<(AccountName, AccountName, u32), BTreeSet<u64>>,
    index: &TransferIndex<'_>,
    window: &ObservationWindow,
) -> Vec<AttackFinding> {
    suspects
        .into_iter()
        .filter_map(|((attacker, victim, day), fakes)| {
            let (profit, ratio, flows) = same_day_profit(index, &attacker, &victim, day)?;
            let mut evidence: Vec<u64> = fakes.into_iter().chain(flows.iter().copied()).collect();
            evidence.sort_unstable();
            evidence.dedup();
            Some(AttackFinding {
                attacker,
                victim,
                kind,
                granularity: None,
                window_start: window.day_start(day),
                window_end: window.day_start(day + 1),
                profit,
                profitability_ratio: ratio,
                profit_share: None,
                evidence,
                flow_evidence: flows,
                signals: None,
            })
        })
        .collect()
}

/// A `transfer` of symbol EOS executed by a contract other than `eosio.token`
/// and addressed to a DApp, followed by same-day profit from that DApp.
pub fn detect_fake_transfer(
    actions: &[ActionRecord],
    index: &TransferIndex<'_>,
    registry: &Registry,
    window: &ObservationWindow,
) -> Vec<AttackFinding> {
    let mut suspects: BTreeMap<(AccountName, AccountName, u32), BTreeSet<u64>> = BTreeMap::new();
    for a in actions {
        if a.action_name != "transfer" || a.executing_contract == TOKEN_CONTRACT {
            continue;
        }
        let Some(t) = a.transfer() else { continue };
        if !t.quantity.is_eos() || t.from == t.to || !is_target(registry, t.to.as_str()) {
            continue;
        }
        let Some(day) = window.day_index(&a.timestamp) else { continue };
        suspects
            .entry((t.from.clone(), t.to.clone(), day))
            .or_default()
            .insert(a.global_seq);
    }
    findings_from(AttackKind::FakeTransfer, suspects, index, window)
}

/// Outcome of the fake-notice detector; `insufficient_data` is set when the
/// trace carries no notification records at all.
#[derive(Debug, Clone, Default)]
pub struct FakeNoticeScan {
    pub findings: Vec<AttackFinding>,
    pub insufficient_data: bool,
}

/// A genuine EOS transfer notification delivered to a DApp that is neither
/// sender nor receiver, followed by same-day profit of the transfer's actor
/// from that DApp.
pub fn detect_fake_notice(
    actions: &[ActionRecord],
    index: &TransferIndex<'_>,
    registry: &Registry,
    window: &ObservationWindow,
) -> FakeNoticeScan {
    if !actions.iter().any(ActionRecord::is_notification) {
        return FakeNoticeScan { findings: Vec::new(), insufficient_data: true };
    }
    let mut suspects: BTreeMap<(AccountName, AccountName, u32), BTreeSet<u64>> = BTreeMap::new();
    for a in actions.iter().filter(|a| a.is_notification() && a.is_genuine_eos_transfer()) {
        let (Some(t), Some(b)) = (a.transfer(), a.notified.as_ref()) else { continue };
        if b == &t.from || b == &t.to || !is_target(registry, b.as_str()) {
            continue;
        }
        let Some(day) = window.day_index(&a.timestamp) else { continue };
        suspects
            .entry((a.actor.clone(), b.clone(), day))
            .or_default()
            .insert(a.global_seq);
    }
    FakeNoticeScan {
        findings: findings_from(AttackKind::FakeNotice, suspects, index, window),
        insufficient_data: false,
    }
}
