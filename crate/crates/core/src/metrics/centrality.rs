use crate::graph::{Digraph, Direction};
use crate::model::AccountName;

/// The `k` nodes of highest degree, ties broken by account name ascending.
pub fn top_k_by_degree(g: &Digraph, k: usize, direction: Direction) -> Vec<(AccountName, usize)> {
    let mut v: Vec<(AccountName, usize)> = (0..g.node_count() as u32)
        .map(|u| (g.name(u).clone(), g.degree(u, direction)))
        .collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(k);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::name;

    #[test]
    fn tie_goes_to_lower_name() {
        let g = Digraph::from_edges(
            vec![name("bbb"), name("aaa"), name("ccc")],
            vec![(0, 2, 1.0), (1, 2, 1.0)],
        );
        let top = top_k_by_degree(&g, 2, Direction::Out);
        assert_eq!(top, vec![(name("aaa"), 1), (name("bbb"), 1)]);
    }
}
