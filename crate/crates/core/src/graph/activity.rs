//! Per-account activity tables derived from the money-flow and invocation graphs.

use std::collections::{BTreeMap, HashMap};

use super::{Ecig, Emfg};
use crate::model::{AccountName, Amount};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DayActivity {
    pub out_count: u32,
    pub out_amount: Amount,
    pub in_count: u32,
    pub in_amount: Amount,
    pub invocations: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairFlow {
    pub received: Amount,
    pub sent: Amount,
}

#[derive(Debug, Clone, Default)]
pub struct AccountActivity {
    pub days: BTreeMap<u32, DayActivity>,
    /// Invocations per contract.
    pub contracts: BTreeMap<AccountName, u64>,
    /// Money exchanged with each counterparty.
    pub counterparties: BTreeMap<AccountName, PairFlow>,
}

impl AccountActivity {
    pub fn invocation_total(&self) -> u64 {
        self.contracts.values().sum()
    }

    pub fn transfers_out(&self) -> u64 {
        self.days.values().map(|d| u64::from(d.out_count)).sum()
    }

    pub fn transfers_in(&self) -> u64 {
        self.days.values().map(|d| u64::from(d.in_count)).sum()
    }

    pub fn transfer_targets(&self) -> usize {
        self.counterparties
            .values()
            .filter(|f| f.sent > Amount::ZERO)
            .count()
    }

    /// Days with at least one initiated transfer or invocation.
    pub fn active_days(&self) -> usize {
        self.days
            .values()
            .filter(|d| d.out_count > 0 || d.invocations > 0)
            .count()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ActivityIndex {
    accounts: HashMap<AccountName, AccountActivity>,
}

impl ActivityIndex {
    pub fn build(emfg: &Emfg, ecig: &Ecig) -> Self {
        let mut accounts: HashMap<AccountName, AccountActivity> = HashMap::new();
        for (u, v, days) in emfg.edges() {
            let (from, to) = (emfg.name(u), emfg.name(v));
            let total = Emfg::edge_total(days);
            {
                let a = accounts.entry(from.clone()).or_default();
                for (&d, f) in days {
                    let e = a.days.entry(d).or_default();
                    e.out_count += f.count;
                    e.out_amount += f.amount;
                }
                a.counterparties.entry(to.clone()).or_default().sent += total;
            }
            let b = accounts.entry(to.clone()).or_default();
            for (&d, f) in days {
                let e = b.days.entry(d).or_default();
                e.in_count += f.count;
                e.in_amount += f.amount;
            }
            b.counterparties.entry(from.clone()).or_default().received += total;
        }
        for (u, v, m) in ecig.edges() {
            let a = accounts.entry(ecig.name(u).clone()).or_default();
            for (&(d, _), &c) in m {
                a.days.entry(d).or_default().invocations += c;
            }
            *a.contracts.entry(ecig.name(v).clone()).or_insert(0) += Ecig::edge_total(m);
        }
        ActivityIndex { accounts }
    }

    pub fn get(&self, account: &str) -> Option<&AccountActivity> {
        self.accounts.get(account)
    }
}
