//! Network metrics and centrality rankings over [`Digraph`](crate::graph::Digraph).

pub mod centrality;
pub mod clustering;
pub mod components;
pub mod correlation;
pub mod pagerank;
pub mod report;

pub use centrality::top_k_by_degree;
pub use clustering::{clustering_coefficient, eligible_nodes, local_clustering};
pub use components::{strongly_connected, weakly_connected, Partition};
pub use correlation::{assortativity, pearson_in_out};
pub use pagerank::{pagerank, pagerank_emfg, top_k_scores, PageRankConfig};
pub use report::{render_table, MetricsReport};
