//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::oracles::*;
use common::Built;
use eosio_forensics::attacks::{write_findings, AttackKind, ScanConfig};
use eosio_forensics::botnet::*;
use eosio_forensics::graph::export::{write_eacg_csv, write_ecig_csv, write_emfg_csv};
use eosio_forensics::graph::Digraph;
use eosio_forensics::metrics::*;
use eosio_forensics::model::{write_action_trace, AccountName, Amount};
use eosio_forensics::parallel::with_threads;
use eosio_forensics::permissions::{detect_misuse, scan_updateauth, write_findings_csv, Severity};
use eosio_forensics::synth::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let took = t.elapsed();
    check(took < limit, format!("took {took:.1?}, limit {limit:?}"))?;
    Ok(took)
}

fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).abs() <= tol,
        (a, b) => a == b,
    }
}

fn metric_oracles() -> Outcome {
    let t = Instant::now();
    let cfg = PageRankConfig { tol: 1e-13, ..PageRankConfig::default() };
    for i in 0..200u64 {
        let n = 2 + (i as usize * 7) % 49;
        let p = [0.02, 0.06, 0.12, 0.25][i as usize % 4];
        let g = random_digraph(n, p, i % 2 == 1, 10_000 + i);
        for weighted in [false, true] {
            check(
                close(clustering_coefficient(&g, weighted), fagiolo_oracle(&g, weighted), 1e-8),
                format!("graph {i}: clustering (weighted={weighted})"),
            )?;
        }
        let xs: Vec<f64> = g.edges().map(|(u, _, _)| g.out_degree(u) as f64).collect();
        let ys: Vec<f64> = g.edges().map(|(_, v, _)| g.in_degree(v) as f64).collect();
        let want = if xs.len() < 2 { None } else { pearson_two_pass(&xs, &ys) };
        check(close(assortativity(&g), want, 1e-8), format!("graph {i}: assortativity"))?;
        let ins: Vec<f64> = (0..n as u32).map(|u| g.in_degree(u) as f64).collect();
        let outs: Vec<f64> = (0..n as u32).map(|u| g.out_degree(u) as f64).collect();
        check(close(pearson_in_out(&g), pearson_two_pass(&ins, &outs), 1e-8), format!("graph {i}: pearson"))?;
        check(strongly_connected(&g).components == scc_oracle(&g), format!("graph {i}: scc"))?;
        check(weakly_connected(&g).components == wcc_oracle(&g), format!("graph {i}: wcc"))?;
        let pr = pagerank(&g, &cfg).map_err(|e| e.to_string())?;
        let want = pagerank_oracle(&g, cfg.damping);
        let worst = pr.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        check(worst <= 1e-8, format!("graph {i}: pagerank off by {worst:e}"))?;
    }
    let took = within(t, Duration::from_secs(60))?;
    Ok(format!("200 graphs, all metrics match, {took:.1?}"))
}

fn graph_conservation() -> Outcome {
    let t = Instant::now();
    let chain = generate(&ScenarioConfig::volume(21, 1_000_000)).map_err(|e| e.to_string())?;
    check(chain.actions.len() >= 1_000_000, format!("only {} actions", chain.actions.len()))?;
    let built = Built::new(&chain);
    let stats = &chain.truth.stats;
    let (emfg, eacg, ecig) = (&built.graphs.emfg, &built.graphs.eacg, &built.graphs.ecig);
    check(emfg.total_weight() == stats.transfer_total, format!("EMFG {} vs planted {}", emfg.total_weight(), stats.transfer_total))?;
    check(emfg.transfer_count() == stats.transfer_count, "transfer count")?;
    check(eacg.is_forest(), "EACG is not a forest")?;
    check(eacg.edge_count() + eacg.roots().len() == eacg.node_count(), "EACG edges + roots != nodes")?;
    check(eacg.node_count() == chain.snapshot.accounts.len(), "EACG nodes != snapshot accounts")?;
    check(
        ecig.total_invocations() == stats.invocation_count,
        format!("ECIG {} vs {} invocations", ecig.total_invocations(), stats.invocation_count),
    )?;
    let took = within(t, Duration::from_secs(120))?;
    Ok(format!("{} actions, {} transfers, {} invocations, {took:.1?}", chain.actions.len(), stats.transfer_count, stats.invocation_count))
}

fn grid() -> GridSpec {
    GridSpec { n_trees: vec![50, 100], max_depth: vec![Some(12), None], min_leaf: vec![1, 5] }
}

fn bot_recovery() -> Outcome {
    let t = Instant::now();
    let chain = generate(&ScenarioConfig::bot_benchmark(31)).map_err(|e| e.to_string())?;
    let built = Built::new(&chain);
    let ctx = built.ctx();
    let truth = &chain.truth;
    check(truth.bot_communities.len() == 20 && truth.services.len() == 10, "benchmark shape")?;

    let cal = calibrate_from_registry(&ctx).map_err(|e| e.to_string())?;
    let community_only = detect_bots(&ctx, &cal.threshold, &BotConfig::default(), None);
    let flagged: BTreeSet<&AccountName> = community_only.scan.flagged().map(|c| &c.controller).collect();
    let recovered = truth.bot_communities.iter().filter(|c| flagged.contains(&c.controller)).count();
    let services = truth.services.iter().filter(|s| flagged.contains(&s.controller)).count();
    check(recovered >= 19, format!("{recovered}/20 communities"))?;
    check(services == 0, format!("{services} services flagged"))?;

    let (_, feats, labels) = labeled_features(&ctx);
    let x: Vec<Vec<f64>> = feats.iter().map(|f| f.to_array().to_vec()).collect();
    let model = train_classifier(&x, &labels, 0.8, 31, &grid()).map_err(|e| e.to_string())?;
    let combined = detect_bots(&ctx, &cal.threshold, &BotConfig::default(), Some(&model));
    let found: BTreeSet<&AccountName> = combined.bots().map(|v| &v.account).collect();
    let labeled: Vec<&AccountName> =
        truth.bot_communities.iter().filter(|c| c.labeled).flat_map(|c| &c.members).collect();
    let missed = labeled.iter().filter(|a| !found.contains(*a)).count();
    check(missed == 0, format!("{missed}/{} calibration-community bots missed", labeled.len()))?;
    let all = truth.bots();
    let hit = all.keys().filter(|a| found.contains(*a)).count();
    let took = within(t, Duration::from_secs(300))?;
    Ok(format!(
        "{recovered}/20 communities, 0 services, {} calibration-community bots all found ({hit}/{} planted overall), {took:.1?}",
        labeled.len(),
        all.len()
    ))
}

fn classifier_accuracy() -> Outcome {
    let (feats, labels) = labeled_feature_set(5000, 5000, 41);
    let x: Vec<Vec<f64>> = feats.iter().map(|f| f.to_array().to_vec()).collect();
    let model = train_classifier(&x, &labels, 0.8, 41, &grid()).map_err(|e| e.to_string())?;
    check(model.test_accuracy >= 0.99, format!("held-out accuracy {:.4}", model.test_accuracy))?;
    let null = permutation_null_accuracy(&x, &labels, model.params, 0.8, 41).map_err(|e| e.to_string())?;
    check((0.4..=0.6).contains(&null), format!("permutation null {null:.4}"))?;
    Ok(format!("held-out accuracy {:.4}, permutation null {null:.4}", model.test_accuracy))
}

fn calibration_box() -> Outcome {
    let direct = SimilarityThreshold { mean_t: 0.09, sd_t: 0.08, mean_s: 0.03, sd_s: 0.05 };
    // two-valued columns with exactly these population moments: a fraction p of
    // rows at mean/p and the rest at 0, with p = mean^2 / (mean^2 + sd^2)
    let (n, k_t, k_s) = (4930usize, 81 * 34, 9 * 145);
    let hi_t = 0.09 * n as f64 / k_t as f64;
    let hi_s = 0.03 * n as f64 / k_s as f64;
    let table: Vec<(f64, f64)> = (0..n)
        .map(|i| (if i < k_t { hi_t } else { 0.0 }, if i % 34 < 9 { hi_s } else { 0.0 }))
        .collect();
    let fitted = calibrate_threshold(&table).map_err(|e| e.to_string())?;
    for th in [direct, fitted] {
        check(th.time_box() == (0.0, 0.33), format!("time box {:?}", th.time_box()))?;
        check(th.target_box() == (0.0, 0.18), format!("target box {:?}", th.target_box()))?;
    }
    Ok(format!(
        "fitted mean/sd ({:.4}, {:.4}) ({:.4}, {:.4}) give [0, 0.33] x [0, 0.18]",
        fitted.mean_t, fitted.sd_t, fitted.mean_s, fitted.sd_s
    ))
}

fn permission_audit() -> Outcome {
    let chain = generate(&ScenarioConfig::permission_benchmark(51, 1000, 150)).map_err(|e| e.to_string())?;
    let grants = &chain.truth.grants;
    let below = grants.iter().filter(|g| g.weight < g.threshold).count();
    let benign = grants.iter().filter(|g| g.expected == Severity::Benign).count();
    check(below > 0 && benign > 0, "decoys missing")?;
    let scan = scan_updateauth(&chain.actions, &chain.window);
    let (findings, _) = detect_misuse(&scan.history, &chain.snapshot);
    let got: BTreeSet<u64> =
        findings.iter().filter(|f| f.severity == Severity::Misuse).map(|f| f.grant.action_seq).collect();
    let want: BTreeSet<u64> = chain.truth.misuse_seqs().into_iter().collect();
    check(want.len() == 150, format!("{} planted misuses", want.len()))?;
    let tp = got.intersection(&want).count() as f64;
    let (precision, recall) = (tp / got.len().max(1) as f64, tp / want.len() as f64);
    check(precision == 1.0 && recall == 1.0, format!("precision {precision:.4} recall {recall:.4}"))?;
    Ok(format!("1000 sequences, {below} below-threshold and {benign} shared-key decoys, precision 1 recall 1"))
}

type Pair = (AttackKind, AccountName, AccountName);

fn pairs(built: &Built<'_>, cfg: &ScanConfig) -> BTreeSet<Pair> {
    built.attacks(cfg).findings.into_iter().map(|f| (f.kind, f.attacker, f.victim)).collect()
}

fn attack_scan() -> Outcome {
    let chain = generate(&ScenarioConfig::attack_benchmark(61)).map_err(|e| e.to_string())?;
    let built = Built::new(&chain);
    let truth: BTreeSet<(&AccountName, &AccountName)> =
        chain.truth.attacks.iter().map(|a| (&a.attacker, &a.victim)).collect();
    check(truth.len() == 12, format!("{} planted attacks", truth.len()))?;
    let found = pairs(&built, &ScanConfig::default());
    let found_pairs: BTreeSet<(&AccountName, &AccountName)> = found.iter().map(|(_, a, v)| (a, v)).collect();
    let hit = found_pairs.intersection(&truth).count() as f64;
    let recall = hit / truth.len() as f64;
    let precision = hit / found_pairs.len().max(1) as f64;
    check(recall == 1.0, format!("recall {recall:.4}"))?;
    check(precision >= 0.9, format!("precision {precision:.4}"))?;
    for a in &chain.truth.attacks {
        check(found.contains(&(a.kind, a.attacker.clone(), a.victim.clone())), format!("{} {}->{} missed", a.kind, a.attacker, a.victim))?;
    }

    let w1s = [200u64, 400, 800];
    let w2s = [1.1, 1.2, 1.5];
    let w3s = [0.8, 0.9, 0.95];
    let mut grid = BTreeMap::new();
    for (i, &w1) in w1s.iter().enumerate() {
        for (j, &w2) in w2s.iter().enumerate() {
            for (k, &w3) in w3s.iter().enumerate() {
                let cfg = ScanConfig { w1: Amount::from_tokens(w1), w2, w3, ..ScanConfig::default() };
                grid.insert((i, j, k), pairs(&built, &cfg));
            }
        }
    }
    let mut comparisons = 0;
    for (a, fa) in &grid {
        for (b, fb) in &grid {
            if a != b && a.0 <= b.0 && a.1 <= b.1 && a.2 <= b.2 {
                comparisons += 1;
                check(fb.is_subset(fa), format!("stricter {b:?} finds more than {a:?}"))?;
            }
        }
    }
    Ok(format!("recall 1, precision {precision:.4}, monotone over {comparisons} ordered grid pairs"))
}

fn run_all(seed: u64) -> BTreeMap<&'static str, Vec<u8>> {
    let mut out = BTreeMap::new();
    let chain = generate(&ScenarioConfig::preset("small", seed).unwrap()).unwrap();
    let mut trace = Vec::new();
    write_action_trace(&mut trace, &chain.actions).unwrap();
    out.insert("trace", trace);

    let built = Built::new(&chain);
    let g = &built.graphs;
    let mut buf = Vec::new();
    write_emfg_csv(&g.emfg, &mut buf).unwrap();
    out.insert("emfg", std::mem::take(&mut buf));
    write_eacg_csv(&g.eacg, &mut buf).unwrap();
    out.insert("eacg", std::mem::take(&mut buf));
    write_ecig_csv(&g.ecig, &mut buf).unwrap();
    out.insert("ecig", std::mem::take(&mut buf));

    let digraphs: [Digraph; 3] = [g.emfg.to_digraph(), g.eacg.to_digraph(), g.ecig.to_digraph()];
    let metrics: Vec<_> = digraphs.iter().map(|d| MetricsReport::compute(d, true)).collect();
    let ranks: Vec<_> = digraphs.iter().map(|d| pagerank(d, &PageRankConfig::default()).unwrap()).collect();
    out.insert("metrics", serde_json::to_vec(&(metrics, ranks)).unwrap());

    let ctx = built.ctx();
    let cal = calibrate_from_registry(&ctx).unwrap();
    let (feats, labels) = labeled_feature_set(300, 300, seed);
    let x: Vec<Vec<f64>> = feats.iter().map(|f| f.to_array().to_vec()).collect();
    let model = train_classifier(&x, &labels, 0.8, seed, &grid()).unwrap();
    out.insert("model", serde_json::to_vec(&model).unwrap());
    let bots = detect_bots(&ctx, &cal.threshold, &BotConfig::default(), Some(&model));
    write_verdicts(&bots.verdicts, &mut buf).unwrap();
    out.insert("bots", std::mem::take(&mut buf));

    let scan = scan_updateauth(&chain.actions, &chain.window);
    let (findings, _) = detect_misuse(&scan.history, &chain.snapshot);
    write_findings_csv(&findings, &mut buf).unwrap();
    out.insert("perms", std::mem::take(&mut buf));

    write_findings(&built.attacks(&ScanConfig::default()).findings, &mut buf).unwrap();
    out.insert("attacks", buf);
    out
}

fn determinism() -> Outcome {
    let one = with_threads(Some(1), || run_all(71)).map_err(|e| e.to_string())?;
    let eight = with_threads(Some(8), || run_all(71)).map_err(|e| e.to_string())?;
    let again = with_threads(Some(8), || run_all(71)).map_err(|e| e.to_string())?;
    for (stage, bytes) in &one {
        check(!bytes.is_empty(), format!("{stage} output is empty"))?;
        check(eight[stage] == *bytes, format!("{stage}: threads=1 vs threads=8 differ"))?;
        check(again[stage] == *bytes, format!("{stage}: re-run differs"))?;
    }
    Ok(format!("{} stage outputs byte-identical across re-runs and 1 vs 8 threads", one.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("metric-oracle equivalence", metric_oracles),
        ("graph conservation", graph_conservation),
        ("bot pipeline recovery", bot_recovery),
        ("classifier accuracy", classifier_accuracy),
        ("calibration box", calibration_box),
        ("permission audit", permission_audit),
        ("attack scan", attack_scan),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
