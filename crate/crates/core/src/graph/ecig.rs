use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::digraph::Digraph;
use crate::model::{AccountName, ActionRecord, ObservationWindow};

/// Enhanced contract-invocation graph: caller → contract edges with
/// invocation counts per (day, action name).
#[derive(Debug, Clone, Default)]
pub struct Ecig {
    nodes: Vec<AccountName>,
    index: HashMap<AccountName, u32>,
    action_names: Vec<String>,
    edges: BTreeMap<(u32, u32), BTreeMap<(u32, u32), u32>>,
}

/// Whether a record counts as an invocation: any non-notification action.
pub fn is_invocation(a: &ActionRecord) -> bool {
    !a.is_notification()
}

impl Ecig {
    /// Every external, inline or deferred action inside the window is an
    /// invocation of its executing contract by its authorizing actor.
    pub fn build(actions: &[ActionRecord], window: &ObservationWindow) -> Self {
        let rows = actions.iter().filter(|a| is_invocation(a)).filter_map(|a| {
            let day = window.day_index(&a.timestamp)?;
            Some((a.actor.clone(), a.executing_contract.clone(), day, a.action_name.clone(), 1))
        });
        Self::from_rows(rows)
    }

    /// Build from `(caller, contract, day, action, count)` rows.
    pub fn from_rows(
        rows: impl IntoIterator<Item = (AccountName, AccountName, u32, String, u32)>,
    ) -> Self {
        let rows: Vec<_> = rows.into_iter().filter(|r| r.4 > 0).collect();
        let nodes: Vec<AccountName> = rows
            .iter()
            .flat_map(|r| [&r.0, &r.1])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let index: HashMap<AccountName, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        let action_names: Vec<String> = rows
            .iter()
            .map(|r| r.3.as_str())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_string)
            .collect();
        let action_index: HashMap<&str, u32> = action_names
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i as u32))
            .collect();
        let mut edges: BTreeMap<(u32, u32), BTreeMap<(u32, u32), u32>> = BTreeMap::new();
        for (caller, contract, day, action, count) in &rows {
            let key = (index[caller], index[contract]);
            *edges
                .entry(key)
                .or_default()
                .entry((*day, action_index[action.as_str()]))
                .or_insert(0) += count;
        }
        Ecig {
            nodes,
            index,
            action_names,
            edges,
        }
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

    pub fn action_name(&self, id: u32) -> &str {
        &self.action_names[id as usize]
    }

    /// `f(edge, day, action)`; zero when absent.
    pub fn count(&self, caller: &str, contract: &str, day: u32, action: &str) -> u32 {
        let (Some(u), Some(v)) = (self.index_of(caller), self.index_of(contract)) else {
            return 0;
        };
        let Some(a) = self.action_names.iter().position(|x| x == action) else {
            return 0;
        };
        self.edges
            .get(&(u, v))
            .and_then(|m| m.get(&(day, a as u32)))
            .copied()
            .unwrap_or(0)
    }

    /// `(caller, contract, {(day, action id) → count})` in edge order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, &BTreeMap<(u32, u32), u32>)> {
        self.edges.iter().map(|(&(u, v), m)| (u, v, m))
    }

    pub fn edge_total(m: &BTreeMap<(u32, u32), u32>) -> u64 {
        m.values().map(|&c| u64::from(c)).sum()
    }

    pub fn total_invocations(&self) -> u64 {
        self.edges.values().map(Self::edge_total).sum()
    }

    pub fn has_outgoing(&self, name: &str) -> bool {
        match self.index_of(name) {
            Some(u) => self.edges.range((u, 0)..(u + 1, 0)).next().is_some(),
            None => false,
        }
    }

    /// Distinct invoked contracts, sorted by name.
    pub fn contracts(&self) -> Vec<&AccountName> {
        self.edges
            .keys()
            .map(|&(_, v)| v)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|v| &self.nodes[v as usize])
            .collect()
    }

    /// Invocation counts become edge weights.
    pub fn to_digraph(&self) -> Digraph {
        Digraph::from_edges(
            self.nodes.clone(),
            self.edges
                .iter()
                .map(|(&(u, v), m)| (u, v, Self::edge_total(m) as f64)),
        )
    }
}
