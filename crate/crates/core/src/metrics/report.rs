use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{assortativity, clustering_coefficient, pearson_in_out, strongly_connected, weakly_connected};
use crate::graph::Digraph;

/// Structural summary of one graph. Undefined correlations serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub clustering: Option<f64>,
    pub assortativity: Option<f64>,
    pub pearson_in_out: Option<f64>,
    pub scc_count: usize,
    pub largest_scc: usize,
    pub wcc_count: usize,
    pub largest_wcc: usize,
}

impl MetricsReport {
    pub fn compute(g: &Digraph, weighted_clustering: bool) -> Self {
        let scc = strongly_connected(g);
        let wcc = weakly_connected(g);
        MetricsReport {
            nodes: g.node_count(),
            edges: g.edge_count(),
            clustering: clustering_coefficient(g, weighted_clustering),
            assortativity: assortativity(g),
            pearson_in_out: pearson_in_out(g),
            scc_count: scc.count(),
            largest_scc: scc.largest(),
            wcc_count: wcc.count(),
            largest_wcc: wcc.largest(),
        }
    }
}

fn fmt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "/".to_string(), |v| format!("{v:.4}"))
}

/// Side-by-side text table, one column per named graph.
pub fn render_table(columns: &[(&str, &MetricsReport)]) -> String {
    type Row = (&'static str, fn(&MetricsReport) -> String);
    let rows: [Row; 9] = [
        ("Nodes", |r| r.nodes.to_string()),
        ("Edges", |r| r.edges.to_string()),
        ("Clustering", |r| fmt_real(r.clustering)),
        ("Assortativity", |r| fmt_real(r.assortativity)),
        ("Pearson", |r| fmt_real(r.pearson_in_out)),
        ("# SCC", |r| r.scc_count.to_string()),
        ("Largest SCC", |r| r.largest_scc.to_string()),
        ("# WCC", |r| r.wcc_count.to_string()),
        ("Largest WCC", |r| r.largest_wcc.to_string()),
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|(_, f)| columns.iter().map(|(_, r)| f(r)).collect())
        .collect();
    let label_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("Metrics".len());
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, (h, _))| cells.iter().map(|c| c[i].len()).max().unwrap_or(0).max(h.len()))
        .collect();

    let mut out = String::new();
    let _ = write!(out, "{:>label_w$}", "Metrics");
    for ((h, _), w) in columns.iter().zip(&widths) {
        let _ = write!(out, " | {h:>w$}");
    }
    out.push('\n');
    let total = label_w + widths.iter().map(|w| w + 3).sum::<usize>();
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for ((label, _), row) in rows.iter().zip(&cells) {
        let _ = write!(out, "{label:>label_w$}");
        for (c, w) in row.iter().zip(&widths) {
            let _ = write!(out, " | {c:>w$}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_report() {
        let g = Digraph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]);
        let r = MetricsReport::compute(&g, false);
        assert_eq!(r.scc_count, 1);
        assert_eq!(r.wcc_count, 1);
        assert_eq!(r.assortativity, None);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["assortativity"].is_null());
        let table = render_table(&[("EMFG", &r)]);
        assert!(table.contains("Largest WCC"));
        assert!(table.lines().any(|l| l.contains("Assortativity") && l.ends_with('/')));
    }
}
