//! CSV edge lists and bounded DOT export.
//!
//! Edge-list layouts:
//!
//! * `emfg_edges.csv`: `from,to,day,amount,count` (amount as `1.0000`)
//! * `eacg_edges.csv`: `creator,child,day` (day relative to window start, may be negative)
//! * `ecig_edges.csv`: `caller,contract,day,action,count`

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::digraph::Digraph;
use super::emfg::DayFlow;
use super::{Eacg, Ecig, Emfg};
use crate::error::{Error, Result};
use crate::model::{AccountName, Quantity};

#[derive(Debug, Serialize, Deserialize)]
struct EmfgRow {
    from: AccountName,
    to: AccountName,
    day: u32,
    amount: String,
    count: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct EcigRow {
    caller: AccountName,
    contract: AccountName,
    day: u32,
    action: String,
    count: u32,
}

fn csv_writer(w: impl Write) -> csv::Writer<impl Write> {
    csv::Writer::from_writer(w)
}

pub fn write_emfg_csv(g: &Emfg, w: impl Write) -> Result<()> {
    let mut out = csv_writer(w);
    for (u, v, days) in g.edges() {
        for (&day, flow) in days {
            out.serialize(EmfgRow {
                from: g.name(u).clone(),
                to: g.name(v).clone(),
                day,
                amount: flow.amount.to_string(),
                count: flow.count,
            })
            .map_err(|e| Error::csv("<emfg>", e))?;
        }
    }
    out.flush().map_err(|e| Error::io("<emfg>", e))
}

pub fn read_emfg_csv(path: &Path) -> Result<Emfg> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut rows = Vec::new();
    for row in rdr.deserialize::<EmfgRow>() {
        let row = row.map_err(|e| Error::csv(path, e))?;
        let amount = format!("{} EOS", row.amount).parse::<Quantity>()?.amount;
        rows.push((
            row.from,
            row.to,
            row.day,
            DayFlow {
                amount,
                count: row.count,
            },
        ));
    }
    Ok(Emfg::from_rows(rows))
}

pub fn write_eacg_csv(g: &Eacg, w: impl Write) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["creator", "child", "day"])
        .map_err(|e| Error::csv("<eacg>", e))?;
    for c in 0..g.node_count() as u32 {
        if let Some(p) = g.creator(c) {
            out.write_record([
                g.name(p).as_str(),
                g.name(c).as_str(),
                &g.created_day(c).to_string(),
            ])
            .map_err(|e| Error::csv("<eacg>", e))?;
        }
    }
    out.flush().map_err(|e| Error::io("<eacg>", e))
}

pub fn write_ecig_csv(g: &Ecig, w: impl Write) -> Result<()> {
    let mut out = csv_writer(w);
    for (u, v, m) in g.edges() {
        for (&(day, action), &count) in m {
            out.serialize(EcigRow {
                caller: g.name(u).clone(),
                contract: g.name(v).clone(),
                day,
                action: g.action_name(action).to_string(),
                count,
            })
            .map_err(|e| Error::csv("<ecig>", e))?;
        }
    }
    out.flush().map_err(|e| Error::io("<ecig>", e))
}

pub fn read_ecig_csv(path: &Path) -> Result<Ecig> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut rows = Vec::new();
    for row in rdr.deserialize::<EcigRow>() {
        let r = row.map_err(|e| Error::csv(path, e))?;
        rows.push((r.caller, r.contract, r.day, r.action, r.count));
    }
    Ok(Ecig::from_rows(rows))
}

/// Weighted edge list of a collapsed digraph: `from,to,weight`.
pub fn write_digraph_csv(g: &Digraph, w: impl Write) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["from", "to", "weight"])
        .map_err(|e| Error::csv("<digraph>", e))?;
    for (u, v, wt) in g.edges() {
        out.write_record([g.name(u).as_str(), g.name(v).as_str(), &format!("{wt}")])
            .map_err(|e| Error::csv("<digraph>", e))?;
    }
    out.flush().map_err(|e| Error::io("<digraph>", e))
}

/// DOT rendering of the subgraph induced by the `max_nodes` highest total-degree nodes
/// (ties broken by name).
pub fn write_dot(g: &Digraph, graph_name: &str, max_nodes: usize, w: &mut impl Write) -> std::io::Result<()> {
    let mut order: Vec<u32> = (0..g.node_count() as u32).collect();
    order.sort_by(|&a, &b| {
        let da = g.in_degree(a) + g.out_degree(a);
        let db = g.in_degree(b) + g.out_degree(b);
        db.cmp(&da).then_with(|| g.name(a).cmp(g.name(b)))
    });
    let keep: BTreeSet<u32> = order.into_iter().take(max_nodes).collect();
    writeln!(w, "digraph {graph_name} {{")?;
    for &u in &keep {
        writeln!(w, "  \"{}\";", g.name(u))?;
    }
    for (u, v, wt) in g.edges() {
        if keep.contains(&u) && keep.contains(&v) {
            writeln!(w, "  \"{}\" -> \"{}\" [weight={wt}];", g.name(u), g.name(v))?;
        }
    }
    writeln!(w, "}}")
}
