//! Degree correlations.
//!
//! Sums are accumulated as integers so constant degree sequences are detected as
//! exactly zero variance.

use crate::graph::Digraph;

fn pearson_exact(pairs: impl Iterator<Item = (u64, u64)>) -> Option<f64> {
    let (mut m, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128, 0i128);
    for (x, y) in pairs {
        let (x, y) = (x as i128, y as i128);
        m += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    if m < 2 {
        return None;
    }
    let vx = m * sxx - sx * sx;
    let vy = m * syy - sy * sy;
    if vx == 0 || vy == 0 {
        return None;
    }
    let cov = m * sxy - sx * sy;
    let r = cov as f64 / ((vx as f64).sqrt() * (vy as f64).sqrt());
    Some(r.clamp(-1.0, 1.0))
}

/// Directed degree assortativity: correlation over edges between the source's
/// out-degree and the target's in-degree. `None` on zero variance or fewer than two edges.
pub fn assortativity(g: &Digraph) -> Option<f64> {
    pearson_exact(
        g.edges()
            .map(|(u, v, _)| (g.out_degree(u) as u64, g.in_degree(v) as u64)),
    )
}

/// Correlation across nodes between in-degree and out-degree.
pub fn pearson_in_out(g: &Digraph) -> Option<f64> {
    pearson_exact((0..g.node_count() as u32).map(|u| (g.in_degree(u) as u64, g.out_degree(u) as u64)))
}
