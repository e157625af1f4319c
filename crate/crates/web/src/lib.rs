//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain numbers or a JSON string and returns a JSON string,
//! so the page needs no bundler and no generated TypeScript types.

use std::cell::RefCell;
use std::collections::BTreeSet;

use eosio_forensics::attacks::{scan_attacks, AttackInputs, AttackKind, ScanConfig};
use eosio_forensics::botnet::SimilarityThreshold;
use eosio_forensics::graph::{synthetic_label, Digraph, Direction};
use eosio_forensics::metrics::{pagerank, top_k_by_degree, MetricsReport, PageRankConfig};
use eosio_forensics::model::{extract_transfers, AccountName, Amount, Transfer};
use eosio_forensics::synth::{generate, ScenarioConfig, SyntheticChain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn to_js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Erdős–Rényi digraph with integer weights in `1..=max_weight`.
pub fn random_digraph(n: usize, p: f64, max_weight: u32, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.random_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v, f64::from(rng.random_range(1..=max_weight.max(1)))));
            }
        }
    }
    Digraph::from_edges((0..n).map(synthetic_label).collect(), edges)
}

pub fn digraph_metrics(n: usize, p: f64, seed: u64, weighted: bool) -> Result<String, String> {
    if n == 0 || n > 400 {
        return Err(format!("node count must be 1..=400, got {n}"));
    }
    let g = random_digraph(n, p, 10, seed);
    let report = MetricsReport::compute(&g, weighted);
    let pr = pagerank(&g, &PageRankConfig::default()).map_err(|e| e.to_string())?;
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| pr[b as usize].total_cmp(&pr[a as usize]).then(a.cmp(&b)));
    let top: Vec<_> = order
        .iter()
        .take(5)
        .map(|&u| json!({ "node": u, "account": g.name(u), "score": pr[u as usize] }))
        .collect();
    let indeg: Vec<_> = top_k_by_degree(&g, 5, Direction::In)
        .into_iter()
        .map(|(a, d)| json!({ "account": a, "degree": d }))
        .collect();
    let edges: Vec<_> = g.edges().map(|(u, v, w)| [f64::from(u), f64::from(v), w]).collect();
    Ok(json!({ "report": report, "pagerank_top": top, "in_degree_top": indeg, "edges": edges }).to_string())
}

/// Metrics, PageRank leaders and the edge list of a random digraph.
#[wasm_bindgen]
pub fn random_digraph_metrics(n: usize, p: f64, seed: u32, weighted: bool) -> Result<String, JsError> {
    to_js(digraph_metrics(n, p, u64::from(seed), weighted))
}

#[derive(Debug, Clone, Deserialize)]
pub struct Point {
    pub label: String,
    pub dist_t: f64,
    pub dist_s: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Placed<'a> {
    label: &'a str,
    dist_t: f64,
    dist_s: f64,
    inside: bool,
}

pub fn box_membership(mean_t: f64, sd_t: f64, mean_s: f64, sd_s: f64, points_json: &str) -> Result<String, String> {
    if [sd_t, sd_s].iter().any(|s| *s < 0.0) {
        return Err("standard deviations must be non-negative".into());
    }
    let points: Vec<Point> = serde_json::from_str(points_json).map_err(|e| e.to_string())?;
    let th = SimilarityThreshold { mean_t, sd_t, mean_s, sd_s };
    let placed: Vec<Placed<'_>> = points
        .iter()
        .map(|p| Placed { label: &p.label, dist_t: p.dist_t, dist_s: p.dist_s, inside: th.contains(p.dist_t, p.dist_s) })
        .collect();
    let inside = placed.iter().filter(|p| p.inside).count();
    Ok(json!({
        "time_box": th.time_box(),
        "target_box": th.target_box(),
        "points": placed,
        "inside": inside,
    })
    .to_string())
}

/// Acceptance box for the given calibration and which community points fall inside it.
#[wasm_bindgen]
pub fn similarity_box(mean_t: f64, sd_t: f64, mean_s: f64, sd_s: f64, points_json: &str) -> Result<String, JsError> {
    to_js(box_membership(mean_t, sd_t, mean_s, sd_s, points_json))
}

struct Cached {
    seed: u64,
    chain: SyntheticChain,
    transfers: Vec<Transfer>,
}

thread_local! {
    static CHAIN: RefCell<Option<Cached>> = const { RefCell::new(None) };
}

/// The attack benchmark scaled down to browser size.
pub fn demo_attack_config(seed: u64) -> ScenarioConfig {
    ScenarioConfig { normal_account_count: 600, day_count: 20, decoys: 8, ..ScenarioConfig::attack_benchmark(seed) }
}

pub fn scan_with(seed: u64, w1: f64, w2: f64, w3: f64) -> Result<String, String> {
    CHAIN.with(|cell| {
        let mut slot = cell.borrow_mut();
        if slot.as_ref().is_none_or(|c| c.seed != seed) {
            let chain = generate(&demo_attack_config(seed)).map_err(|e| e.to_string())?;
            let (transfers, _) = extract_transfers(&chain.actions, &chain.window);
            *slot = Some(Cached { seed, chain, transfers });
        }
        let c = slot.as_ref().expect("filled above");
        let cfg = ScanConfig { w1: Amount((w1 * 1e4).round().max(0.0) as u64), w2, w3, ..ScanConfig::default() };
        let log = c.chain.rollback_log();
        let inputs = AttackInputs {
            actions: &c.chain.actions,
            transfers: &c.transfers,
            registry: &c.chain.registry,
            window: &c.chain.window,
            rollback: Some(&log),
        };
        let report = scan_attacks(&inputs, &cfg).map_err(|e| e.to_string())?;
        let truth: BTreeSet<(&AccountName, &AccountName)> =
            c.chain.truth.attacks.iter().map(|a| (&a.attacker, &a.victim)).collect();
        let found: BTreeSet<(&AccountName, &AccountName)> =
            report.findings.iter().map(|f| (&f.attacker, &f.victim)).collect();
        let hit = found.intersection(&truth).count();
        let rows: Vec<_> = report
            .findings
            .iter()
            .map(|f| {
                json!({
                    "attacker": f.attacker,
                    "victim": f.victim,
                    "kind": f.kind,
                    "profit": f.profit.to_string(),
                    "ratio": f.profitability_ratio.to_string(),
                    "profit_share": f.profit_share,
                    "planted": truth.contains(&(&f.attacker, &f.victim)),
                })
            })
            .collect();
        Ok(json!({
            "actions": c.chain.actions.len(),
            "planted": truth.len(),
            "findings": rows,
            "predictable_state": report.count(AttackKind::PredictableState),
            "suspicious_windows": report.suspicious.len(),
            "recall": if truth.is_empty() { 1.0 } else { hit as f64 / truth.len() as f64 },
            "precision": if found.is_empty() { 1.0 } else { hit as f64 / found.len() as f64 },
        })
        .to_string())
    })
}

/// Attack scan over a seeded synthetic chain at the given thresholds. The chain
/// is generated once per seed and kept for later calls.
#[wasm_bindgen]
pub fn attack_scan(seed: u32, w1: f64, w2: f64, w3: f64) -> Result<String, JsError> {
    to_js(scan_with(u64::from(seed), w1, w2, w3))
}
