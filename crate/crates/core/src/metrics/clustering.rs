//! Directed "total" clustering after Fagiolo (2007).
//!
//! For node `i` with symmetrised weights `s_ij = a_ij + a_ji`, where
//! `a_ij = (w_ij / max w)^(1/3)` (or the 0/1 adjacency when unweighted),
//!
//! ```text
//! C_i = [S^3]_ii / (2 [d_tot (d_tot - 1) - 2 d_recip])
//! ```
//!
//! `d_tot` is in-degree plus out-degree and `d_recip` counts reciprocated
//! neighbours. The graph coefficient is the mean of `C_i` over nodes whose
//! denominator is positive.

use super::super::graph::Digraph;

/// Per-node clustering; `None` for nodes with a zero denominator.
pub fn local_clustering(g: &Digraph, weighted: bool) -> Vec<Option<f64>> {
    let n = g.node_count();
    let max_w = g.max_weight();
    let a = |w: f64| -> f64 {
        if weighted && max_w > 0.0 {
            (w / max_w).cbrt()
        } else {
            1.0
        }
    };

    // symmetric adjacency with s_ij = a_ij + a_ji
    let mut sym: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut reciprocal = vec![0usize; n];
    for u in 0..n as u32 {
        let (outs, ins) = (g.out_edges(u), g.in_edges(u));
        let (mut i, mut j) = (0, 0);
        let list = &mut sym[u as usize];
        while i < outs.len() || j < ins.len() {
            let o = outs.get(i).map(|e| e.0);
            let p = ins.get(j).map(|e| e.0);
            match (o, p) {
                (Some(x), Some(y)) if x == y => {
                    list.push((x, a(outs[i].1) + a(ins[j].1)));
                    reciprocal[u as usize] += 1;
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    list.push((x, a(outs[i].1)));
                    i += 1;
                }
                (Some(x), None) => {
                    list.push((x, a(outs[i].1)));
                    i += 1;
                }
                (_, Some(y)) => {
                    list.push((y, a(ins[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }

    // Each undirected triangle is visited once along a degree orientation and
    // credited to its three corners; ordered (j, h) pairs double the product.
    let rank = |u: u32| (sym[u as usize].len(), u);
    let forward: Vec<Vec<(u32, f64)>> = (0..n as u32)
        .map(|u| {
            sym[u as usize]
                .iter()
                .copied()
                .filter(|&(v, _)| rank(v) > rank(u))
                .collect()
        })
        .collect();
    let mut numerator = vec![0.0f64; n];
    let mut mark = vec![f64::NAN; n];
    for u in 0..n {
        for &(v, s) in &forward[u] {
            mark[v as usize] = s;
        }
        for &(v, s_uv) in &forward[u] {
            for &(w, s_vw) in &forward[v as usize] {
                let s_uw = mark[w as usize];
                if !s_uw.is_nan() {
                    let t = 2.0 * s_uv * s_vw * s_uw;
                    numerator[u] += t;
                    numerator[v as usize] += t;
                    numerator[w as usize] += t;
                }
            }
        }
        for &(v, _) in &forward[u] {
            mark[v as usize] = f64::NAN;
        }
    }

    (0..n)
        .map(|i| {
            let d_tot = g.in_degree(i as u32) + g.out_degree(i as u32);
            let possible = d_tot * d_tot.saturating_sub(1);
            let den = possible as i64 - 2 * reciprocal[i] as i64;
            (den > 0).then(|| numerator[i] / (2.0 * den as f64))
        })
        .collect()
}

/// Mean directed total clustering over eligible nodes; `None` when no node is eligible.
pub fn clustering_coefficient(g: &Digraph, weighted: bool) -> Option<f64> {
    let local = local_clustering(g, weighted);
    let (sum, count) = local
        .iter()
        .flatten()
        .fold((0.0, 0usize), |(s, c), &x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Number of nodes that enter the average.
pub fn eligible_nodes(g: &Digraph) -> usize {
    local_clustering(g, false).iter().flatten().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bidirectional_triangle_is_one() {
        let g = Digraph::unweighted(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]);
        let c = clustering_coefficient(&g, false).unwrap();
        assert!((c - 1.0).abs() < 1e-12, "{c}");
        assert!((clustering_coefficient(&g, true).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_is_zero() {
        let g = Digraph::unweighted(3, &[(0, 1), (1, 2)]);
        assert_eq!(clustering_coefficient(&g, false), Some(0.0));
    }

    #[test]
    fn no_eligible_node() {
        let g = Digraph::unweighted(2, &[(0, 1)]);
        assert_eq!(clustering_coefficient(&g, false), None);
    }

    #[test]
    fn cyclic_triangle() {
        // one directed 3-cycle: each node has d_tot = 2, no reciprocity,
        // numerator 2 (two ordered pairs) over 2 * 2 = 4
        let g = Digraph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]);
        let c = clustering_coefficient(&g, false).unwrap();
        assert!((c - 0.5).abs() < 1e-12, "{c}");
    }
}
