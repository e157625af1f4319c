//! Strongly and weakly connected components.

use serde::Serialize;

use crate::graph::Digraph;

/// A partition of the nodes; components are sorted by size descending, then by
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub components: Vec<Vec<u32>>,
    /// node → component index
    pub membership: Vec<u32>,
}

impl Partition {
    fn from_labels(labels: Vec<u32>) -> Self {
        let k = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut components: Vec<Vec<u32>> = vec![Vec::new(); k];
        for (u, &l) in labels.iter().enumerate() {
            components[l as usize].push(u as u32);
        }
        components.retain(|c| !c.is_empty());
        components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut membership = vec![0u32; labels.len()];
        for (i, c) in components.iter().enumerate() {
            for &u in c {
                membership[u as usize] = i as u32;
            }
        }
        Partition { components, membership }
    }

    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn largest(&self) -> usize {
        self.components.first().map_or(0, Vec::len)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

/// Tarjan's algorithm with an explicit call stack.
pub fn strongly_connected(g: &Digraph) -> Partition {
    const UNSEEN: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut label = vec![0u32; n];
    let mut next_index = 0u32;
    let mut next_label = 0u32;
    // (node, position in its out-edge list)
    let mut calls: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (u, ref mut pos)) = calls.last_mut() {
            let outs = g.out_edges(u);
            if let Some(&(v, _)) = outs.get(*pos) {
                *pos += 1;
                let vi = v as usize;
                if index[vi] == UNSEEN {
                    index[vi] = next_index;
                    low[vi] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[vi] = true;
                    calls.push((v, 0));
                } else if on_stack[vi] {
                    low[u as usize] = low[u as usize].min(index[vi]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent as usize] = low[parent as usize].min(low[u as usize]);
            }
            if low[u as usize] == index[u as usize] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    label[w as usize] = next_label;
                    if w == u {
                        break;
                    }
                }
                next_label += 1;
            }
        }
    }
    Partition::from_labels(label)
}

/// Union-find over edges treated as undirected.
pub fn weakly_connected(g: &Digraph) -> Partition {
    let n = g.node_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[x as usize];
            parent[x as usize] = parent[p as usize];
            x = p;
        }
        x
    }
    for (u, v, _) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi as usize] = lo;
        }
    }
    let labels = (0..n as u32).map(|u| find(&mut parent, u)).collect();
    Partition::from_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_components() {
        let g = Digraph::unweighted(5, &[(0, 1), (1, 2), (3, 4)]);
        assert_eq!(strongly_connected(&g).count(), 5);
        assert_eq!(weakly_connected(&g).count(), 2);
        assert_eq!(weakly_connected(&g).sizes(), vec![3, 2]);
    }

    #[test]
    fn two_cycles_joined() {
        let g = Digraph::unweighted(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let s = strongly_connected(&g);
        assert_eq!(s.count(), 2);
        assert_eq!(s.components, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(weakly_connected(&g).count(), 1);
    }

    #[test]
    fn empty_graph() {
        let g = Digraph::unweighted(0, &[]);
        assert_eq!(strongly_connected(&g).count(), 0);
        assert_eq!(weakly_connected(&g).largest(), 0);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000u32;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).chain([(n - 1, 0)]).collect();
        let g = Digraph::unweighted(n as usize, &edges);
        assert_eq!(strongly_connected(&g).count(), 1);
    }
}
