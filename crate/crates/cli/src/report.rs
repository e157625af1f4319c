use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use eosio_forensics::attacks::read_findings;
use eosio_forensics::metrics::{render_table, MetricsReport};
use eosio_forensics::model::format_timestamp;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::data::OutDir;
use crate::summary::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Both,
}

#[derive(Deserialize)]
struct MetricsRow {
    graph: String,
    #[serde(flatten)]
    report: MetricsReport,
}

/// A titled table, rendered as aligned text or CSV.
struct Table {
    title: &'static str,
    file: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Already rendered in the text report by other means.
    csv_only: bool,
}

impl Table {
    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{c:<w$}");
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = format!("{}\n", self.title);
        out.push_str(&line(self.header.clone()));
        for r in &self.rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }

    fn csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner()?)
    }
}

/// `dir/name`, else `dir/<sub>/name` for the first subdirectory (by name) that has it.
fn locate(dir: &Path, name: &str) -> Option<PathBuf> {
    let direct = dir.join(name);
    if direct.is_file() {
        return Some(direct);
    }
    let mut subs: Vec<PathBuf> = std::fs::read_dir(dir)
        .ok()?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subs.sort();
    subs.into_iter().map(|d| d.join(name)).find(|p| p.is_file())
}

fn load<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Option<T>> {
    let Some(p) = locate(dir, name) else {
        return Ok(None);
    };
    let f = File::open(&p).with_context(|| format!("reading {}", p.display()))?;
    Ok(Some(serde_json::from_reader(BufReader::new(f)).with_context(|| format!("parsing {}", p.display()))?))
}

fn pct(n: usize, total: usize) -> String {
    if total == 0 {
        "/".into()
    } else {
        format!("{:.2}%", 100.0 * n as f64 / total as f64)
    }
}

pub fn report(dir: &Path, format: Format, out_dir: &Path) -> Result<crate::Outcome> {
    let mut tables = Vec::new();
    let mut extra = String::new();

    if let Some(rows) = load::<Vec<MetricsRow>>(dir, METRICS_JSON)? {
        let cols: Vec<(&str, &MetricsReport)> = rows.iter().map(|r| (r.graph.as_str(), &r.report)).collect();
        let _ = writeln!(extra, "Network metrics\n{}", render_table(&cols));
        let opt = |x: Option<f64>| x.map_or("/".to_string(), |v| format!("{v:.4}"));
        tables.push(Table {
            title: "Network metrics",
            file: "report_metrics.csv",
            header: vec!["graph", "nodes", "edges", "clustering", "assortativity", "pearson", "scc", "largest_scc", "wcc", "largest_wcc"],
            rows: rows
                .iter()
                .map(|r| {
                    let m = &r.report;
                    vec![
                        r.graph.clone(),
                        m.nodes.to_string(),
                        m.edges.to_string(),
                        opt(m.clustering),
                        opt(m.assortativity),
                        opt(m.pearson_in_out),
                        m.scc_count.to_string(),
                        m.largest_scc.to_string(),
                        m.wcc_count.to_string(),
                        m.largest_wcc.to_string(),
                    ]
                })
                .collect(),
            csv_only: true,
        });
    }

    if let Some(b) = load::<BotSummary>(dir, BOTS_JSON)? {
        let mut rows: Vec<Vec<String>> = b
            .categories
            .iter()
            .map(|(k, &v)| vec![k.clone(), v.to_string(), pct(v, b.bot_accounts)])
            .collect();
        rows.push(vec!["total".into(), b.bot_accounts.to_string(), pct(b.bot_accounts, b.bot_accounts)]);
        tables.push(Table { title: "Bot categories", file: "report_bots.csv", header: vec!["category", "accounts", "share"], rows, csv_only: false });
    }

    if let Some(p) = load::<PermSummary>(dir, PERMS_JSON)? {
        let _ = writeln!(
            extra,
            "eosio.code grants: {} of {} updateauth actions; misuse {} ({} pairs, {} granters), partial {}, benign {}\n",
            p.grant_actions,
            p.updateauth_actions,
            p.misuse_actions,
            p.misuse_pairs,
            p.misuse_granters,
            p.partial_actions,
            p.benign_actions
        );
        tables.push(Table {
            title: "Top eosio.code grantees",
            file: "report_perms.csv",
            header: vec!["permission", "grantee", "granters"],
            rows: p
                .top_grantees
                .iter()
                .map(|g| vec![g.permission.clone(), g.grantee.clone(), g.granters.to_string()])
                .collect(),
            csv_only: false,
        });
    }

    if let Some(findings_path) = locate(dir, FINDINGS_NDJSON) {
        let f = File::open(&findings_path).with_context(|| format!("reading {}", findings_path.display()))?;
        let findings = read_findings(BufReader::new(f))?;
        tables.push(Table {
            title: "Attack findings",
            file: "report_attacks.csv",
            header: vec!["attacker", "victim", "kind", "window_start", "window_end", "profit", "ratio", "profit_share"],
            rows: findings
                .iter()
                .map(|f| {
                    vec![
                        f.attacker.to_string(),
                        f.victim.to_string(),
                        f.kind.to_string(),
                        format_timestamp(&f.window_start),
                        format_timestamp(&f.window_end),
                        f.profit.to_string(),
                        f.profitability_ratio.to_string(),
                        f.profit_share.map_or("/".to_string(), |p| format!("{p:.4}")),
                    ]
                })
                .collect(),
            csv_only: false,
        });
    }

    let mut out = OutDir::create(out_dir)?;
    if tables.is_empty() && extra.is_empty() {
        anyhow::bail!("missing input: {} holds no stage outputs to report on", dir.display());
    }
    let mut text = extra;
    for t in tables.iter().filter(|t| !t.csv_only) {
        text.push_str(&t.text());
        text.push('\n');
    }
    if format != Format::Csv {
        out.text("report.txt", &text)?;
        print!("{text}");
    }
    if format != Format::Text {
        for t in &tables {
            let bytes = t.csv()?;
            out.text(t.file, std::str::from_utf8(&bytes)?)?;
        }
    }
    out.list();
    Ok(crate::Outcome::Clean)
}
