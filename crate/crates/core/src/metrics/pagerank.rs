use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Emfg};
use crate::model::AccountName;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

/// Weighted PageRank. Each node passes rank along out-edges in proportion to
/// edge weight; nodes without out-weight spread their rank uniformly.
///
/// Scores are renormalised to sum to one after every iteration. Iteration stops
/// once the L1 change drops below `tol`.
pub fn pagerank(g: &Digraph, cfg: &PageRankConfig) -> Result<Vec<f64>> {
    if !(cfg.damping > 0.0 && cfg.damping < 1.0) {
        return Err(Error::Config(format!("damping must lie in (0,1), got {}", cfg.damping)));
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let out_weight: Vec<f64> = (0..n as u32)
        .map(|u| g.out_edges(u).iter().map(|e| e.1).sum())
        .collect();
    let mut rank = vec![1.0 / nf; n];
    let mut delta = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let dangling: f64 = (0..n).filter(|&u| out_weight[u] <= 0.0).map(|u| rank[u]).sum();
        let base = (1.0 - cfg.damping) / nf + cfg.damping * dangling / nf;
        let mut next: Vec<f64> = (0..n as u32)
            .into_par_iter()
            .map(|v| {
                let inflow: f64 = g
                    .in_edges(v)
                    .iter()
                    .map(|&(u, w)| rank[u as usize] * w / out_weight[u as usize])
                    .sum();
                base + cfg.damping * inflow
            })
            .collect();
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        debug_assert!((next.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        delta = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if delta < cfg.tol {
            return Ok(rank);
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        delta,
        last: rank,
    })
}

/// PageRank over the money-flow graph with cumulative EOS as edge weight.
pub fn pagerank_emfg(emfg: &Emfg, cfg: &PageRankConfig) -> Result<BTreeMap<AccountName, f64>> {
    let g = emfg.to_digraph();
    let scores = pagerank(&g, cfg)?;
    Ok(g.names().iter().cloned().zip(scores).collect())
}

/// The `k` highest-ranked entries, ties broken by name.
pub fn top_k_scores(scores: &BTreeMap<AccountName, f64>, k: usize) -> Vec<(AccountName, f64)> {
    let mut v: Vec<_> = scores.iter().map(|(a, &s)| (a.clone(), s)).collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(k);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_cycle() {
        let g = Digraph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]);
        let r = pagerank(&g, &PageRankConfig::default()).unwrap();
        for x in r {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_convergence_carries_iterate() {
        let g = Digraph::unweighted(3, &[(0, 1), (1, 2)]);
        let cfg = PageRankConfig { max_iter: 1, ..Default::default() };
        match pagerank(&g, &cfg) {
            Err(Error::NoConvergence { last, iterations, .. }) => {
                assert_eq!(iterations, 1);
                assert!((last.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_damping() {
        let g = Digraph::unweighted(2, &[(0, 1)]);
        let cfg = PageRankConfig { damping: 1.0, ..Default::default() };
        assert!(pagerank(&g, &cfg).is_err());
    }
}
