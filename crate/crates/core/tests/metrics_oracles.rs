//! Metrics checked against brute-force dense implementations.

mod common;

use common::oracles::*;
use eosio_forensics::graph::{synthetic_label, Digraph, Direction};
use eosio_forensics::metrics::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn clustering_matches_triple_enumeration() {
    for seed in 0..20 {
        for weighted in [false, true] {
            let g = random_digraph(25, 0.2, weighted, seed);
            let got = clustering_coefficient(&g, weighted);
            let want = fagiolo_oracle(&g, weighted);
            match (got, want) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12, "seed {seed}: {a} vs {b}"),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn assortativity_matches_edge_list_pearson() {
    // two disjoint stars of sizes 3 and 6
    let mut edges = Vec::new();
    for leaf in 1..=3 {
        edges.push((0u32, leaf));
    }
    for leaf in 5..=10 {
        edges.push((4u32, leaf));
    }
    edges.push((1, 5));
    let g = Digraph::unweighted(11, &edges);
    let xs: Vec<f64> = g.edges().map(|(u, _, _)| g.out_degree(u) as f64).collect();
    let ys: Vec<f64> = g.edges().map(|(_, v, _)| g.in_degree(v) as f64).collect();
    let want = pearson_two_pass(&xs, &ys).unwrap();
    assert!((assortativity(&g).unwrap() - want).abs() < 1e-12);

    for seed in 0..10 {
        let g = random_digraph(30, 0.1, false, 100 + seed);
        let xs: Vec<f64> = g.edges().map(|(u, _, _)| g.out_degree(u) as f64).collect();
        let ys: Vec<f64> = g.edges().map(|(_, v, _)| g.in_degree(v) as f64).collect();
        let (a, b) = (assortativity(&g), pearson_two_pass(&xs, &ys));
        assert!((a.unwrap() - b.unwrap()).abs() < 1e-12);
    }
}

#[test]
fn hub_heavy_graph_is_disassortative() {
    // hubs send to many fresh leaves; leaves send back to one hub each
    let (hubs, leaves_per_hub) = (5u32, 40u32);
    let mut edges = Vec::new();
    let mut next = hubs;
    for h in 0..hubs {
        for _ in 0..leaves_per_hub {
            edges.push((h, next));
            edges.push((next, (h + 1) % hubs));
            next += 1;
        }
    }
    let g = Digraph::unweighted(next as usize, &edges);
    assert!(assortativity(&g).unwrap() < 0.0);
}

#[test]
fn pearson_matches_direct_formula() {
    for seed in 0..10 {
        let g = random_digraph(30, 0.15, false, 200 + seed);
        let xs: Vec<f64> = (0..30).map(|u| g.in_degree(u) as f64).collect();
        let ys: Vec<f64> = (0..30).map(|u| g.out_degree(u) as f64).collect();
        let want = pearson_two_pass(&xs, &ys).unwrap();
        assert!((pearson_in_out(&g).unwrap() - want).abs() < 1e-12);
    }
    // constant in-degree
    let cyc = Digraph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]);
    assert_eq!(pearson_in_out(&cyc), None);
}

#[test]
fn scc_matches_reachability_closure() {
    for seed in 0..20 {
        let g = random_digraph(50, 0.03, false, 300 + seed);
        assert_eq!(strongly_connected(&g).components, scc_oracle(&g), "seed {seed}");
    }
}

#[test]
fn pagerank_matches_dense_power_iteration() {
    for seed in 0..10 {
        let g = random_digraph(10, 0.3, true, 400 + seed);
        let got = pagerank(&g, &PageRankConfig::default()).unwrap();
        let want = pagerank_oracle(&g, 0.85);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn planted_mega_creator_ranks_first() {
    // a chain of creations plus one account that creates 50
    let mut edges: Vec<(u32, u32)> = (0..99).map(|i| (i, i + 1)).collect();
    for c in 100..150 {
        edges.push((37, c));
    }
    let g = Digraph::unweighted(150, &edges);
    let top = top_k_by_degree(&g, 5, Direction::Out);
    assert_eq!(top[0].0, synthetic_label(37));
    assert_eq!(top[0].1, 51);
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (3..max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n as u32, 0..n as u32, 1u32..100), 0..n * 3).prop_map(move |es| {
            Digraph::from_edges(
                (0..n).map(synthetic_label).collect(),
                es.into_iter().map(|(u, v, w)| (u, v, w as f64)),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_invariants(g in arb_graph(40)) {
        let r = MetricsReport::compute(&g, false);
        prop_assert!(r.largest_scc <= r.largest_wcc && r.largest_wcc <= r.nodes);
        prop_assert!(r.scc_count >= r.wcc_count);
        if let Some(c) = r.clustering {
            prop_assert!((0.0..=1.0).contains(&c));
        }
        if let Some(c) = clustering_coefficient(&g, true) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        }
        for x in [r.assortativity, r.pearson_in_out].into_iter().flatten() {
            prop_assert!((-1.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn partitions_cover_and_refine(g in arb_graph(40)) {
        let scc = strongly_connected(&g);
        let wcc = weakly_connected(&g);
        let mut all: Vec<u32> = scc.components.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..g.node_count() as u32).collect::<Vec<_>>());
        for comp in &scc.components {
            let w = wcc.membership[comp[0] as usize];
            prop_assert!(comp.iter().all(|&u| wcc.membership[u as usize] == w));
        }
    }

    #[test]
    fn metrics_are_label_invariant(g in arb_graph(30), seed in any::<u64>()) {
        let n = g.node_count();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let h = g.permuted(&perm);
        let (a, b) = (MetricsReport::compute(&g, true), MetricsReport::compute(&h, true));
        prop_assert_eq!(a.scc_count, b.scc_count);
        prop_assert_eq!(a.largest_wcc, b.largest_wcc);
        prop_assert_eq!(a.assortativity, b.assortativity);
        prop_assert_eq!(a.pearson_in_out, b.pearson_in_out);
        match (a.clustering, b.clustering) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-12),
            (x, y) => prop_assert_eq!(x, y),
        }
        let pa = pagerank(&g, &PageRankConfig::default()).unwrap();
        let pb = pagerank(&h, &PageRankConfig::default()).unwrap();
        for u in 0..n {
            prop_assert!((pa[u] - pb[perm[u] as usize]).abs() < 1e-9);
        }
    }

    #[test]
    fn disjoint_union_composes(g in arb_graph(25), h in arb_graph(25)) {
        let u = g.disjoint_union(&h);
        let (rg, rh, ru) = (
            MetricsReport::compute(&g, false),
            MetricsReport::compute(&h, false),
            MetricsReport::compute(&u, false),
        );
        prop_assert_eq!(ru.scc_count, rg.scc_count + rh.scc_count);
        prop_assert_eq!(ru.wcc_count, rg.wcc_count + rh.wcc_count);
        // the mean over eligible nodes composes with eligible-node weights
        let (eg, eh) = (eligible_nodes(&g) as f64, eligible_nodes(&h) as f64);
        if let (Some(cg), Some(ch)) = (rg.clustering, rh.clustering) {
            let want = (cg * eg + ch * eh) / (eg + eh);
            prop_assert!((ru.clustering.unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn pagerank_sums_to_one(g in arb_graph(40)) {
        let r = pagerank(&g, &PageRankConfig::default()).unwrap();
        prop_assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(r.iter().all(|&x| x > 0.0));
    }
}
