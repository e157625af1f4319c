use std::collections::HashMap;

use super::digraph::Digraph;
use crate::error::{Error, Result};
use crate::model::{AccountName, ObservationWindow, Snapshot, Timestamp};

/// Enhanced account-creation graph: a forest of creator → child edges
/// stamped with the child's creation day.
#[derive(Debug, Clone)]
pub struct Eacg {
    nodes: Vec<AccountName>,
    index: HashMap<AccountName, u32>,
    parent: Vec<Option<u32>>,
    children: Vec<Vec<u32>>,
    created_at: Vec<Timestamp>,
    created_day: Vec<i64>,
    depth: Vec<u32>,
    creations_per_day: HashMap<(u32, i64), u32>,
}

impl Eacg {
    pub fn build(snapshot: &Snapshot, window: &ObservationWindow) -> Self {
        let nodes: Vec<AccountName> = snapshot.accounts.keys().cloned().collect();
        let index: HashMap<AccountName, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        let n = nodes.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut created_at = Vec::with_capacity(n);
        let mut created_day = Vec::with_capacity(n);
        for (i, rec) in snapshot.accounts.values().enumerate() {
            created_at.push(rec.created_at);
            created_day.push(window.day_offset(&rec.created_at));
            if let Some(p) = rec.creator.as_ref().and_then(|c| index.get(c)) {
                parent[i] = Some(*p);
                children[*p as usize].push(i as u32);
            }
        }
        let depth = compute_depths(&parent);
        let mut creations_per_day = HashMap::new();
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                *creations_per_day.entry((*p, created_day[c])).or_insert(0) += 1;
            }
        }
        Eacg {
            nodes,
            index,
            parent,
            children,
            created_at,
            created_day,
            depth,
            creations_per_day,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    pub fn nodes(&self) -> &[AccountName] {
        &self.nodes
    }

    pub fn name(&self, i: u32) -> &AccountName {
        &self.nodes[i as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn roots(&self) -> Vec<&AccountName> {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(i, _)| &self.nodes[i])
            .collect()
    }

    pub fn creator(&self, i: u32) -> Option<u32> {
        self.parent[i as usize]
    }

    pub fn children(&self, i: u32) -> &[u32] {
        &self.children[i as usize]
    }

    pub fn created_at(&self, i: u32) -> Timestamp {
        self.created_at[i as usize]
    }

    /// Creation day relative to the window start; negative before it.
    pub fn created_day(&self, i: u32) -> i64 {
        self.created_day[i as usize]
    }

    pub fn depth_of(&self, i: u32) -> u32 {
        self.depth[i as usize]
    }

    pub fn depth(&self, account: &str) -> Result<u32> {
        self.index_of(account)
            .map(|i| self.depth_of(i))
            .ok_or_else(|| Error::UnknownAccount(account.to_string()))
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// All descendants of `i` (excluding `i`) in breadth-first order.
    pub fn descendants(&self, i: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut frontier = vec![i];
        while let Some(u) = frontier.pop() {
            for &c in &self.children[u as usize] {
                out.push(c);
                frontier.push(c);
            }
        }
        out
    }

    /// Number of other accounts created by the same creator on the same UTC day.
    pub fn siblings_same_day(&self, i: u32) -> usize {
        let Some(p) = self.parent[i as usize] else { return 0 };
        let day = self.created_day[i as usize];
        self.creations_per_day[&(p, day)] as usize - 1
    }

    /// Verify the forest property: each non-root has one parent and no cycle exists.
    pub fn is_forest(&self) -> bool {
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if self.edge_count() + roots != self.node_count() {
            return false;
        }
        let mut seen = vec![false; self.node_count()];
        let mut stack: Vec<u32> = (0..self.node_count() as u32)
            .filter(|&i| self.parent[i as usize].is_none())
            .collect();
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            if std::mem::replace(&mut seen[u as usize], true) {
                return false;
            }
            visited += 1;
            stack.extend(&self.children[u as usize]);
        }
        visited == self.node_count()
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph::from_edges(
            self.nodes.clone(),
            self.parent
                .iter()
                .enumerate()
                .filter_map(|(c, p)| p.map(|p| (p, c as u32, 1.0))),
        )
    }
}

fn compute_depths(parent: &[Option<u32>]) -> Vec<u32> {
    const UNKNOWN: u32 = u32::MAX;
    let mut depth = vec![UNKNOWN; parent.len()];
    let mut path = Vec::new();
    for start in 0..parent.len() {
        let mut cur = start as u32;
        while depth[cur as usize] == UNKNOWN {
            path.push(cur);
            match parent[cur as usize] {
                Some(p) => cur = p,
                None => break,
            }
        }
        let mut d = if depth[cur as usize] == UNKNOWN {
            // reached a root that is itself on the path
            None
        } else {
            Some(depth[cur as usize])
        };
        while let Some(u) = path.pop() {
            let next = d.map_or(0, |x| x + 1);
            depth[u as usize] = next;
            d = Some(next);
        }
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::snapshot;

    #[test]
    fn path_depths() {
        let s = snapshot(&[
            ("eosio", None, "2018-06-09T00:00:00Z"),
            ("a", Some("eosio"), "2018-06-09T01:00:00Z"),
            ("b", Some("a"), "2018-06-10T01:00:00Z"),
        ]);
        let g = Eacg::build(&s, &ObservationWindow::mainnet());
        assert_eq!(g.depth("eosio").unwrap(), 0);
        assert_eq!(g.depth("a").unwrap(), 1);
        assert_eq!(g.depth("b").unwrap(), 2);
        assert_eq!(g.created_day(g.index_of("b").unwrap()), 1);
        assert!(matches!(g.depth("nobody"), Err(Error::UnknownAccount(_))));
        assert_eq!(g.edge_count(), g.node_count() - g.roots().len());
        assert!(g.is_forest());
    }

    #[test]
    fn siblings_counted_per_day() {
        let s = snapshot(&[
            ("eosio", None, "2018-06-09T00:00:00Z"),
            ("a", Some("eosio"), "2018-06-09T01:00:00Z"),
            ("b", Some("eosio"), "2018-06-09T02:00:00Z"),
            ("c", Some("eosio"), "2018-06-10T02:00:00Z"),
        ]);
        let g = Eacg::build(&s, &ObservationWindow::mainnet());
        assert_eq!(g.siblings_same_day(g.index_of("a").unwrap()), 1);
        assert_eq!(g.siblings_same_day(g.index_of("c").unwrap()), 0);
        assert_eq!(g.siblings_same_day(g.index_of("eosio").unwrap()), 0);
    }
}
