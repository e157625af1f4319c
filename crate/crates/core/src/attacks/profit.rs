//! Staged profit scan: windowed profit and ratio (step 1), then the share of
//! lifetime income from the dominant counterparty that was window profit (step 2).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::config::ScanConfig;
use super::finding::{AttackFinding, AttackKind, Granularity, Ratio};
use crate::model::{AccountName, Amount, Diagnostic, ObservationWindow, Registry, Timestamp, Transfer};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Flow {
    received: Amount,
    sent: Amount,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuspiciousWindow {
    pub account: AccountName,
    pub granularity: Granularity,
    /// Day or hour index from the window start.
    pub index: u32,
    pub received: Amount,
    pub sent: Amount,
    pub profit: Amount,
    pub ratio: Ratio,
    /// Counterparty with the largest net inflow in the window, if any paid net.
    pub victim: Option<AccountName>,
    /// Net inflow from the victim in the window.
    pub victim_net: Amount,
}

fn window_index(t: &Transfer, g: Granularity, window: &ObservationWindow) -> Option<u32> {
    match g {
        Granularity::Day => Some(t.day),
        Granularity::Hour => window.hour_index(&t.timestamp),
    }
}

pub fn window_bounds(g: Granularity, index: u32, window: &ObservationWindow) -> (Timestamp, Timestamp) {
    match g {
        Granularity::Day => (window.day_start(index), window.day_start(index + 1)),
        Granularity::Hour => (window.hour_start(index), window.hour_start(index + 1)),
    }
}

/// Transfers touching each account, in input order.
pub struct TransferIndex<'a> {
    by_account: BTreeMap<&'a str, (&'a AccountName, Vec<&'a Transfer>)>,
}

impl<'a> TransferIndex<'a> {
    pub fn new(transfers: &'a [Transfer]) -> Self {
        let mut by_account: BTreeMap<&str, (&AccountName, Vec<&Transfer>)> = BTreeMap::new();
        for t in transfers {
            by_account.entry(t.from.as_str()).or_insert((&t.from, Vec::new())).1.push(t);
            by_account.entry(t.to.as_str()).or_insert((&t.to, Vec::new())).1.push(t);
        }
        TransferIndex { by_account }
    }

    pub fn of(&self, account: &str) -> &[&'a Transfer] {
        self.by_account.get(account).map_or(&[], |e| e.1.as_slice())
    }

    pub fn accounts(&self) -> impl Iterator<Item = &'a AccountName> + '_ {
        self.by_account.values().map(|e| e.0)
    }
}

/// Step 1: every (account, window) whose profit exceeds `w1` and whose ratio
/// exceeds `w2`. The victim is the counterparty with the largest net inflow,
/// chosen among registry DApps when the registry lists any, and it must supply
/// more than half of the window profit to count as the dominant source.
pub fn profit_scan(
    index: &TransferIndex<'_>,
    cfg: &ScanConfig,
    window: &ObservationWindow,
    registry: &Registry,
) -> Vec<SuspiciousWindow> {
    let dapps_only = !registry.dapp_accounts.is_empty();
    let accounts: Vec<&AccountName> = index.accounts().collect();
    let per_account: Vec<Vec<SuspiciousWindow>> = accounts
        .par_iter()
        .map(|&acct| {
            let mut out = Vec::new();
            for &g in &cfg.granularities {
                let mut wins: BTreeMap<u32, (Flow, BTreeMap<&AccountName, Flow>)> = BTreeMap::new();
                for t in index.of(acct.as_str()) {
                    let Some(w) = window_index(t, g, window) else { continue };
                    let (tot, peers) = wins.entry(w).or_default();
                    if &t.to == acct {
                        tot.received += t.amount;
                        peers.entry(&t.from).or_default().received += t.amount;
                    } else {
                        tot.sent += t.amount;
                        peers.entry(&t.to).or_default().sent += t.amount;
                    }
                }
                for (w, (tot, peers)) in wins {
                    if tot.received <= tot.sent {
                        continue;
                    }
                    let profit = Amount(tot.received.0 - tot.sent.0);
                    let ratio = Ratio::of(tot.received, tot.sent);
                    if profit <= cfg.w1 || ratio.0 <= cfg.w2 {
                        continue;
                    }
                    let victim = peers
                        .iter()
                        .filter(|(p, _)| !dapps_only || registry.is_dapp(p.as_str()))
                        .filter(|(_, f)| f.received > f.sent)
                        .map(|(p, f)| (*p, Amount(f.received.0 - f.sent.0)))
                        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
                        .filter(|v| u128::from(v.1 .0) * 2 > u128::from(profit.0));
                    out.push(SuspiciousWindow {
                        account: acct.clone(),
                        granularity: g,
                        index: w,
                        received: tot.received,
                        sent: tot.sent,
                        profit,
                        ratio,
                        victim: victim.map(|v| v.0.clone()),
                        victim_net: victim.map_or(Amount::ZERO, |v| v.1),
                    });
                }
            }
            out
        })
        .collect();
    per_account.into_iter().flatten().collect()
}

/// Step 2: group suspicious windows by (account, victim, granularity) and keep
/// the pairs whose summed window profit from the victim exceeds `w3` of all EOS
/// ever received from it.
pub fn liveness_filter(
    suspicious: &[SuspiciousWindow],
    index: &TransferIndex<'_>,
    cfg: &ScanConfig,
    window: &ObservationWindow,
) -> (Vec<AttackFinding>, Vec<Diagnostic>) {
    let mut groups: BTreeMap<(&AccountName, &AccountName, Granularity), Vec<&SuspiciousWindow>> = BTreeMap::new();
    let mut diagnostics = Vec::new();
    for s in suspicious {
        match &s.victim {
            Some(v) => groups.entry((&s.account, v, s.granularity)).or_default().push(s),
            None => diagnostics.push(Diagnostic {
                line: 0,
                message: format!("{} window {:?}#{}: no counterparty paid net", s.account, s.granularity, s.index),
            }),
        }
    }

    // (attacker, victim) → best finding, preferring day granularity
    let mut kept: BTreeMap<(AccountName, AccountName), AttackFinding> = BTreeMap::new();
    for ((acct, victim, g), wins) in groups {
        let lifetime: Amount = index
            .of(acct.as_str())
            .iter()
            .filter(|t| &t.from == victim && &t.to == acct)
            .map(|t| t.amount)
            .sum();
        if lifetime == Amount::ZERO {
            diagnostics.push(Diagnostic {
                line: 0,
                message: format!("{acct}: no income ever received from {victim}"),
            });
            continue;
        }
        let flagged: BTreeSet<u32> = wins.iter().map(|w| w.index).collect();
        let profit: Amount = wins.iter().map(|w| w.victim_net).sum();
        let p = profit.0 as f64 / lifetime.0 as f64;
        if p <= cfg.w3 {
            continue;
        }
        let flows: Vec<&&Transfer> = index
            .of(acct.as_str())
            .iter()
            .filter(|t| &t.from == victim || &t.to == victim)
            .filter(|t| window_index(t, g, window).is_some_and(|w| flagged.contains(&w)))
            .collect();
        let received: Amount = flows.iter().filter(|t| &t.to == acct).map(|t| t.amount).sum();
        let sent: Amount = flows.iter().filter(|t| &t.from == acct).map(|t| t.amount).sum();
        let mut seqs: Vec<u64> = flows.iter().map(|t| t.seq).collect();
        seqs.sort_unstable();
        let first = *flagged.first().expect("non-empty group");
        let last = *flagged.last().expect("non-empty group");
        let finding = AttackFinding {
            attacker: acct.clone(),
            victim: victim.clone(),
            kind: AttackKind::PredictableState,
            granularity: Some(g),
            window_start: window_bounds(g, first, window).0,
            window_end: window_bounds(g, last, window).1,
            profit,
            profitability_ratio: Ratio::of(received, sent),
            profit_share: Some(p),
            evidence: seqs.clone(),
            flow_evidence: seqs,
            signals: None,
        };
        kept.entry((acct.clone(), victim.clone())).or_insert(finding);
    }
    (kept.into_values().collect(), diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{name, parse_timestamp};

    fn tr(seq: u64, ts: &str, from: &str, to: &str, eos: u64) -> Transfer {
        let w = ObservationWindow::mainnet();
        let timestamp = parse_timestamp(ts).unwrap();
        Transfer {
            seq,
            timestamp,
            day: w.day_index(&timestamp).unwrap(),
            from: name(from),
            to: name(to),
            amount: Amount::from_tokens(eos),
        }
    }

    fn scan(ts: &[Transfer]) -> Vec<SuspiciousWindow> {
        let idx = TransferIndex::new(ts);
        let cfg = ScanConfig { granularities: vec![Granularity::Day], ..Default::default() };
        profit_scan(&idx, &cfg, &ObservationWindow::mainnet(), &Registry::default())
            .into_iter()
            .filter(|s| s.account == "att")
            .collect()
    }

    #[test]
    fn step_one_thresholds() {
        let s = scan(&[tr(1, "2018-07-01T01:00:00Z", "att", "dapp", 400), tr(2, "2018-07-01T02:00:00Z", "dapp", "att", 1000)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].profit, Amount::from_tokens(600));
        assert!((s[0].ratio.0 - 2.5).abs() < 1e-12);

        let s = scan(&[tr(1, "2018-07-01T01:00:00Z", "att", "dapp", 400), tr(2, "2018-07-01T02:00:00Z", "dapp", "att", 700)]);
        assert!(s.is_empty());
        let s = scan(&[tr(1, "2018-07-01T01:00:00Z", "att", "dapp", 1900), tr(2, "2018-07-01T02:00:00Z", "dapp", "att", 2000)]);
        assert!(s.is_empty());
        let s = scan(&[tr(2, "2018-07-01T02:00:00Z", "dapp", "att", 500)]);
        assert!(s[0].ratio.is_infinite());
    }

    #[test]
    fn step_two_liveness() {
        let w = ObservationWindow::mainnet();
        let cfg = ScanConfig::default();
        // long-term player: lots of prior winnings from the dapp
        let mut ts = vec![tr(1, "2018-07-01T01:00:00Z", "att", "dapp", 10), tr(2, "2018-07-01T01:30:00Z", "dapp", "att", 610)];
        for i in 0..20 {
            ts.push(tr(10 + i, &format!("2018-08-{:02}T05:00:00Z", i + 1), "dapp", "att", 300));
            ts.push(tr(100 + i, &format!("2018-08-{:02}T06:00:00Z", i + 1), "att", "dapp", 300));
        }
        let idx = TransferIndex::new(&ts);
        let sus = profit_scan(&idx, &cfg, &w, &Registry::default());
        let (kept, _) = liveness_filter(&sus, &idx, &cfg, &w);
        assert!(kept.is_empty());

        // hit and run
        let ts = vec![tr(1, "2018-07-01T01:00:00Z", "att", "dapp", 10), tr(2, "2018-07-01T01:30:00Z", "dapp", "att", 1000)];
        let idx = TransferIndex::new(&ts);
        let sus = profit_scan(&idx, &cfg, &w, &Registry::default());
        let (kept, _) = liveness_filter(&sus, &idx, &cfg, &w);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].profit, Amount::from_tokens(990));
        assert_eq!(kept[0].granularity, Some(Granularity::Day));
        assert_eq!(kept[0].flow_evidence, vec![1, 2]);
    }
}
