use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::model::AccountName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
    Total,
}

impl std::str::FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "in" => Ok(Direction::In),
            "out" => Ok(Direction::Out),
            "total" => Ok(Direction::Total),
            other => Err(format!("unknown direction {other:?}")),
        }
    }
}

/// Simple weighted digraph over indexed nodes: parallel edges merged, no self-loops.
///
/// Adjacency lists are sorted by neighbour index so that every traversal
/// order is a function of the node labels alone.
#[derive(Debug, Clone, Default)]
pub struct Digraph {
    names: Vec<AccountName>,
    out: Vec<Vec<(u32, f64)>>,
    inn: Vec<Vec<(u32, f64)>>,
}

impl Digraph {
    /// Parallel edges have their weights summed; self-loops are dropped.
    pub fn from_edges(
        names: Vec<AccountName>,
        edges: impl IntoIterator<Item = (u32, u32, f64)>,
    ) -> Self {
        let n = names.len();
        let mut merged: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
            if u != v {
                *merged.entry((u, v)).or_insert(0.0) += w;
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for ((u, v), w) in merged {
            out[u as usize].push((v, w));
            inn[v as usize].push((u, w));
        }
        for list in &mut inn {
            list.sort_by_key(|&(u, _)| u);
        }
        Digraph { names, out, inn }
    }

    /// Unit-weight graph over anonymous nodes `n0, n1, ...`; handy for tests.
    pub fn unweighted(n: usize, edges: &[(u32, u32)]) -> Self {
        let names = (0..n).map(|i| synthetic_label(i)).collect();
        Self::from_edges(names, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn name(&self, u: u32) -> &AccountName {
        &self.names[u as usize]
    }

    pub fn names(&self) -> &[AccountName] {
        &self.names
    }

    pub fn index_map(&self) -> HashMap<&AccountName, u32> {
        self.names.iter().enumerate().map(|(i, n)| (n, i as u32)).collect()
    }

    pub fn out_edges(&self, u: u32) -> &[(u32, f64)] {
        &self.out[u as usize]
    }

    pub fn in_edges(&self, u: u32) -> &[(u32, f64)] {
        &self.inn[u as usize]
    }

    pub fn out_degree(&self, u: u32) -> usize {
        self.out[u as usize].len()
    }

    pub fn in_degree(&self, u: u32) -> usize {
        self.inn[u as usize].len()
    }

    pub fn degree(&self, u: u32, dir: Direction) -> usize {
        match dir {
            Direction::In => self.in_degree(u),
            Direction::Out => self.out_degree(u),
            Direction::Total => self.in_degree(u) + self.out_degree(u),
        }
    }

    pub fn weight(&self, u: u32, v: u32) -> Option<f64> {
        let list = &self.out[u as usize];
        list.binary_search_by_key(&v, |&(t, _)| t).ok().map(|i| list[i].1)
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&(v, w)| (u as u32, v, w)))
    }

    pub fn max_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).fold(0.0, f64::max)
    }

    /// Relabel nodes through `perm` (`new index = perm[old index]`).
    pub fn permuted(&self, perm: &[u32]) -> Digraph {
        let n = self.node_count();
        let mut names = vec![None; n];
        for (old, &new) in perm.iter().enumerate() {
            names[new as usize] = Some(self.names[old].clone());
        }
        let names = names.into_iter().map(|n| n.expect("perm is a permutation")).collect();
        let edges: Vec<_> = self
            .edges()
            .map(|(u, v, w)| (perm[u as usize], perm[v as usize], w))
            .collect();
        Digraph::from_edges(names, edges)
    }

    /// Disjoint union; nodes of `other` are shifted after ours.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let shift = self.node_count() as u32;
        let names = self.names.iter().chain(other.names.iter()).cloned().collect();
        let edges: Vec<_> = self
            .edges()
            .chain(other.edges().map(|(u, v, w)| (u + shift, v + shift, w)))
            .collect();
        Digraph::from_edges(names, edges)
    }
}

/// A valid account name unique to index `i` (`n` followed by base-31 digits).
pub fn synthetic_label(i: usize) -> AccountName {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz12345";
    let mut s = Vec::new();
    let mut x = i;
    loop {
        s.push(ALPHABET[x % 31]);
        x /= 31;
        if x == 0 {
            break;
        }
    }
    s.push(b'n');
    s.reverse();
    AccountName::new(String::from_utf8(s).unwrap()).expect("label alphabet is valid")
}
