use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::digraph::Digraph;
use crate::model::{AccountName, Amount, Transfer};

/// Money moved along one edge during one UTC day.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DayFlow {
    pub amount: Amount,
    pub count: u32,
}

/// Enhanced money-flow graph: day-stamped, amount-weighted transfer edges.
#[derive(Debug, Clone, Default)]
pub struct Emfg {
    nodes: Vec<AccountName>,
    index: HashMap<AccountName, u32>,
    edges: BTreeMap<(u32, u32), BTreeMap<u32, DayFlow>>,
}

impl Emfg {
    pub fn build(transfers: &[Transfer]) -> Self {
        let nodes: Vec<AccountName> = transfers
            .iter()
            .flat_map(|t| [&t.from, &t.to])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let index: HashMap<AccountName, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        let mut edges: BTreeMap<(u32, u32), BTreeMap<u32, DayFlow>> = BTreeMap::new();
        for t in transfers {
            if t.from == t.to || t.amount == Amount::ZERO {
                continue;
            }
            let key = (index[&t.from], index[&t.to]);
            let flow = edges.entry(key).or_default().entry(t.day).or_default();
            flow.amount += t.amount;
            flow.count += 1;
        }
        Emfg { nodes, index, edges }
    }

    /// Rebuild from already aggregated `(from, to, day, flow)` rows.
    pub fn from_rows(rows: impl IntoIterator<Item = (AccountName, AccountName, u32, DayFlow)>) -> Self {
        let rows: Vec<_> = rows.into_iter().collect();
        let nodes: Vec<AccountName> = rows
            .iter()
            .flat_map(|(f, t, _, _)| [f, t])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let index: HashMap<AccountName, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        let mut edges: BTreeMap<(u32, u32), BTreeMap<u32, DayFlow>> = BTreeMap::new();
        for (f, t, day, flow) in rows {
            let e = edges
                .entry((index[&f], index[&t]))
                .or_default()
                .entry(day)
                .or_default();
            e.amount += flow.amount;
            e.count += flow.count;
        }
        Emfg { nodes, index, edges }
    }

    pub fn nodes(&self) -> &[AccountName] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: u32) -> &AccountName {
        &self.nodes[i as usize]
    }

    pub fn edge_days(&self, from: &str, to: &str) -> Option<&BTreeMap<u32, DayFlow>> {
        let key = (self.index_of(from)?, self.index_of(to)?);
        self.edges.get(&key)
    }

    /// `(from, to, per-day flows)` in edge order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, &BTreeMap<u32, DayFlow>)> {
        self.edges.iter().map(|(&(u, v), days)| (u, v, days))
    }

    pub fn edge_total(days: &BTreeMap<u32, DayFlow>) -> Amount {
        days.values().map(|f| f.amount).sum()
    }

    pub fn total_weight(&self) -> Amount {
        self.edges.values().map(Self::edge_total).sum()
    }

    pub fn transfer_count(&self) -> u64 {
        self.edges
            .values()
            .flat_map(|d| d.values())
            .map(|f| u64::from(f.count))
            .sum()
    }

    pub fn has_outgoing(&self, name: &str) -> bool {
        match self.index_of(name) {
            Some(u) => self.edges.range((u, 0)..(u + 1, 0)).next().is_some(),
            None => false,
        }
    }

    /// Collapse days into one edge weighted by cumulative EOS volume.
    pub fn to_digraph(&self) -> Digraph {
        Digraph::from_edges(
            self.nodes.clone(),
            self.edges
                .iter()
                .map(|(&(u, v), days)| (u, v, Self::edge_total(days).as_f64())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{name, parse_timestamp};

    fn t(seq: u64, day: u32, from: &str, to: &str, tokens: u64) -> Transfer {
        Transfer {
            seq,
            timestamp: parse_timestamp("2018-06-09T00:00:00Z").unwrap(),
            day,
            from: name(from),
            to: name(to),
            amount: Amount::from_tokens(tokens),
        }
    }

    #[test]
    fn same_day_transfers_add_up() {
        let g = Emfg::build(&[t(1, 0, "a", "b", 1), t(2, 0, "a", "b", 2)]);
        let days = g.edge_days("a", "b").unwrap();
        assert_eq!(days.len(), 1);
        assert_eq!(days[&0].amount, Amount::from_tokens(3));
        assert_eq!(days[&0].count, 2);
    }

    #[test]
    fn multi_day_edges_keep_each_day() {
        let g = Emfg::build(&[t(1, 0, "a", "b", 1), t(2, 5, "a", "b", 2)]);
        let days = g.edge_days("a", "b").unwrap();
        assert_eq!(days.keys().copied().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_weight(), Amount::from_tokens(3));
    }

    #[test]
    fn outgoing_lookup() {
        let g = Emfg::build(&[t(1, 0, "a", "b", 1)]);
        assert!(g.has_outgoing("a"));
        assert!(!g.has_outgoing("b"));
        assert!(!g.has_outgoing("zzz"));
    }
}
