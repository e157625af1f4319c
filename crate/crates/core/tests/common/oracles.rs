//! Dense brute-force reference implementations of the graph metrics.

use eosio_forensics::graph::{synthetic_label, Digraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_digraph(n: usize, p: f64, weighted: bool, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.random::<f64>() < p {
                let w = if weighted { rng.random_range(0.1..50.0) } else { 1.0 };
                edges.push((u, v, w));
            }
        }
    }
    Digraph::from_edges((0..n).map(synthetic_label).collect(), edges)
}

pub fn dense(g: &Digraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut m = vec![vec![0.0; n]; n];
    for (u, v, w) in g.edges() {
        m[u as usize][v as usize] = w;
    }
    m
}

pub fn fagiolo_oracle(g: &Digraph, weighted: bool) -> Option<f64> {
    let w = dense(g);
    let n = w.len();
    let max = w.iter().flatten().cloned().fold(0.0, f64::max);
    let a: Vec<Vec<f64>> = w
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| match (x > 0.0, weighted) {
                    (false, _) => 0.0,
                    (true, false) => 1.0,
                    (true, true) => (x / max).powf(1.0 / 3.0),
                })
                .collect()
        })
        .collect();
    let mut vals = Vec::new();
    for i in 0..n {
        let mut num = 0.0;
        for j in 0..n {
            for h in 0..n {
                let s_ij = a[i][j] + a[j][i];
                let s_jh = a[j][h] + a[h][j];
                let s_hi = a[h][i] + a[i][h];
                num += s_ij * s_jh * s_hi;
            }
        }
        let d_out = (0..n).filter(|&j| w[i][j] > 0.0).count() as f64;
        let d_in = (0..n).filter(|&j| w[j][i] > 0.0).count() as f64;
        let d_rec = (0..n).filter(|&j| w[i][j] > 0.0 && w[j][i] > 0.0).count() as f64;
        let d_tot = d_in + d_out;
        let den = 2.0 * (d_tot * (d_tot - 1.0) - 2.0 * d_rec);
        if den > 0.0 {
            vals.push(num / den);
        }
    }
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

pub fn pearson_two_pass(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

pub fn scc_oracle(g: &Digraph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
    }
    for (u, v, _) in g.edges() {
        reach[u as usize][v as usize] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let c: Vec<u32> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).map(|j| j as u32).collect();
        for &j in &c {
            seen[j as usize] = true;
        }
        comps.push(c);
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    comps
}

pub fn pagerank_oracle(g: &Digraph, d: f64) -> Vec<f64> {
    let w = dense(g);
    let n = w.len();
    let nf = n as f64;
    // column-stochastic transition matrix with uniform columns for dangling nodes
    let mut m = vec![vec![0.0; n]; n];
    for u in 0..n {
        let s: f64 = w[u].iter().sum();
        for v in 0..n {
            m[v][u] = if s > 0.0 { w[u][v] / s } else { 1.0 / nf };
        }
    }
    let mut r = vec![1.0 / nf; n];
    for _ in 0..10_000 {
        let next: Vec<f64> = (0..n)
            .map(|v| (1.0 - d) / nf + d * (0..n).map(|u| m[v][u] * r[u]).sum::<f64>())
            .collect();
        let delta: f64 = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if delta < 1e-15 {
            break;
        }
    }
    r
}

pub fn wcc_oracle(g: &Digraph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut label: Vec<usize> = (0..n).collect();
    // relabel to the minimum neighbour label until nothing changes
    loop {
        let mut changed = false;
        for (u, v, _) in g.edges() {
            let (u, v) = (u as usize, v as usize);
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut comps: Vec<Vec<u32>> = Vec::new();
    for root in 0..n {
        let c: Vec<u32> = (0..n).filter(|&i| label[i] == root).map(|i| i as u32).collect();
        if !c.is_empty() {
            comps.push(c);
        }
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    comps
}
