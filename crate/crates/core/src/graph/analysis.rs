use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::Serialize;

use super::digraph::{Digraph, Direction};
use super::{Ecig, Emfg};
use crate::model::{AccountName, Snapshot};

/// Accounts that never send EOS and never invoke a contract.
///
/// Receiving money does not break silence.
pub fn silent_accounts(emfg: &Emfg, ecig: &Ecig, snapshot: &Snapshot) -> BTreeSet<AccountName> {
    snapshot
        .accounts
        .keys()
        .filter(|a| !emfg.has_outgoing(a.as_str()) && !ecig.has_outgoing(a.as_str()))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeHistogram {
    pub direction: Direction,
    /// degree → number of nodes with that degree
    pub counts: BTreeMap<usize, usize>,
    /// Discrete maximum-likelihood power-law exponent over degrees ≥ 1.
    /// Advisory only; the fit is never tested for goodness.
    pub power_law_alpha: Option<f64>,
}

pub fn degree_histogram(graph: &Digraph, direction: Direction) -> DegreeHistogram {
    let mut counts = BTreeMap::new();
    for u in 0..graph.node_count() as u32 {
        *counts.entry(graph.degree(u, direction)).or_insert(0) += 1;
    }
    let power_law_alpha = power_law_alpha(&counts, 1);
    DegreeHistogram {
        direction,
        counts,
        power_law_alpha,
    }
}

/// `alpha = 1 + n / Σ ln(x / (x_min - 1/2))` over observations `x ≥ x_min`.
pub fn power_law_alpha(counts: &BTreeMap<usize, usize>, x_min: usize) -> Option<f64> {
    let base = x_min as f64 - 0.5;
    let (mut n, mut s) = (0usize, 0.0f64);
    for (&deg, &c) in counts.range(x_min.max(1)..) {
        n += c;
        s += c as f64 * (deg as f64 / base).ln();
    }
    (n > 1 && s > 0.0).then(|| 1.0 + n as f64 / s)
}

impl DegreeHistogram {
    pub fn node_total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "degree,count")?;
        for (d, c) in &self.counts {
            writeln!(w, "{d},{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Emfg;
    use crate::model::{name, parse_timestamp, Amount, ObservationWindow, Transfer};
    use crate::testutil::{call_action, snapshot};

    #[test]
    fn cycle_histogram() {
        let g = Digraph::unweighted(3, &[(0, 1), (1, 2), (2, 0)]);
        for dir in [Direction::In, Direction::Out] {
            let h = degree_histogram(&g, dir);
            assert_eq!(h.counts, BTreeMap::from([(1, 3)]));
        }
        assert_eq!(degree_histogram(&g, Direction::Total).counts, BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn star_histogram() {
        let g = Digraph::unweighted(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let h = degree_histogram(&g, Direction::Out);
        assert_eq!(h.counts, BTreeMap::from([(0, 5), (5, 1)]));
        assert_eq!(h.node_total(), 6);
        let mut csv = Vec::new();
        h.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "degree,count\n0,5\n5,1\n");
    }

    #[test]
    fn silence_rules() {
        let s = snapshot(&[
            ("eosio", None, "2018-06-09T00:00:00Z"),
            ("payer", Some("eosio"), "2018-06-09T00:00:00Z"),
            ("receiver", Some("eosio"), "2018-06-09T00:00:00Z"),
            ("caller", Some("eosio"), "2018-06-09T00:00:00Z"),
            ("idle", Some("eosio"), "2018-06-09T00:00:00Z"),
        ]);
        let w = ObservationWindow::mainnet();
        let emfg = Emfg::build(&[Transfer {
            seq: 1,
            timestamp: parse_timestamp("2018-06-09T00:00:00Z").unwrap(),
            day: 0,
            from: name("payer"),
            to: name("receiver"),
            amount: Amount::from_tokens(1),
        }]);
        let ecig = Ecig::build(&[call_action(2, "2018-06-09T03:00:00Z", "caller", "eosio", "vote")], &w);
        let silent = silent_accounts(&emfg, &ecig, &s);
        let expect: BTreeSet<_> = ["eosio", "idle", "receiver"].into_iter().map(name).collect();
        assert_eq!(silent, expect);
    }

    #[test]
    fn alpha_on_exact_zipf_like_data() {
        // heavy tail gives a finite exponent above one
        let counts = BTreeMap::from([(1, 1000), (2, 250), (4, 60), (8, 15), (16, 4)]);
        let a = power_law_alpha(&counts, 1).unwrap();
        assert!(a > 1.0 && a < 4.0, "{a}");
        assert_eq!(power_law_alpha(&BTreeMap::new(), 1), None);
    }
}
