use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use eosio_forensics::attacks::{scan_attacks, write_bundle, write_findings, AttackInputs, AttackKind};
use eosio_forensics::botnet::{
    calibrate_from_registry, classify_accounts, detect_bots, labeled_features, train_classifier, write_verdicts,
    ForestModel, ForestParams, GridSpec, SimilarityThreshold,
};
use eosio_forensics::graph::export::{read_ecig_csv, read_emfg_csv, write_eacg_csv, write_ecig_csv, write_emfg_csv};
use eosio_forensics::graph::{silent_accounts, Digraph, Direction};
use eosio_forensics::metrics::{pagerank, render_table, top_k_by_degree, MetricsReport, PageRankConfig};
use eosio_forensics::model::{format_timestamp, write_action_trace, AccountName};
use eosio_forensics::permissions::{detect_misuse, scan_updateauth, summarize, top_grantees, write_findings_csv, Severity};
use eosio_forensics::synth::{generate, ScenarioConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{AttackArgs, BotArgs, DataArgs};
use crate::data::{Dataset, Graphs, OutDir};
use crate::summary::*;
use crate::Outcome;

fn finish(out: &OutDir, found: bool) -> Outcome {
    out.list();
    if found {
        Outcome::Findings
    } else {
        Outcome::Clean
    }
}

pub fn ingest(data: &DataArgs, out_dir: &Path) -> Result<Outcome> {
    let ds = Dataset::load(data, false)?;
    let mut out = OutDir::create(out_dir)?;
    out.json(RUN_CONFIG_JSON, &data.run_config("ingest"))?;

    let mut w = out.writer("actions.ndjson")?;
    write_action_trace(&mut w, &ds.trace.actions)?;
    w.flush()?;
    let mut w = out.writer("accounts.ndjson")?;
    ds.snapshot.write_ndjson(&mut w)?;
    w.flush()?;

    #[derive(Serialize)]
    struct Row<'a> {
        global_seq: u64,
        timestamp: String,
        from: &'a str,
        to: &'a str,
        amount: String,
    }
    out.csv(
        "transfers.csv",
        ds.transfers.iter().map(|t| Row {
            global_seq: t.seq,
            timestamp: format_timestamp(&t.timestamp),
            from: t.from.as_str(),
            to: t.to.as_str(),
            amount: t.amount.to_string(),
        }),
    )?;
    out.ndjson("diagnostics.ndjson", &ds.trace.diagnostics)?;

    let s = &ds.transfer_stats;
    let summary = IngestSummary {
        actions: ds.trace.actions.len(),
        outside_window: ds.trace.outside_window,
        malformed_lines: ds.trace.diagnostics.len(),
        accounts: ds.snapshot.len(),
        snapshot_warnings: ds.snapshot.warnings.len(),
        transfers: ds.transfers.len(),
        notifications: s.notifications,
        unofficial_contract: s.unofficial_contract,
        non_eos_symbol: s.non_eos_symbol,
        self_transfers: s.self_transfers,
    };
    out.json(INGEST_JSON, &summary)?;
    println!(
        "ingested {} actions ({} outside window, {} malformed), {} accounts, {} EOS transfers",
        summary.actions, summary.outside_window, summary.malformed_lines, summary.accounts, summary.transfers
    );
    Ok(finish(&out, false))
}

pub fn graph_build(data: &DataArgs, out_dir: &Path) -> Result<Outcome> {
    let ds = Dataset::load(data, false)?;
    let g = Graphs::build(&ds);
    let mut out = OutDir::create(out_dir)?;
    out.json(RUN_CONFIG_JSON, &data.run_config("graph build"))?;
    write_emfg_csv(&g.set.emfg, out.writer("emfg_edges.csv")?)?;
    write_eacg_csv(&g.set.eacg, out.writer("eacg_edges.csv")?)?;
    write_ecig_csv(&g.set.ecig, out.writer("ecig_edges.csv")?)?;
    let silent = silent_accounts(&g.set.emfg, &g.set.ecig, &ds.snapshot);

    #[derive(Serialize)]
    struct Row<'a> {
        account: &'a str,
    }
    out.csv("silent.csv", silent.iter().map(|a| Row { account: a.as_str() }))?;

    let (emfg, eacg, ecig) = (&g.set.emfg, &g.set.eacg, &g.set.ecig);
    let summary = GraphSummary {
        emfg_nodes: emfg.node_count(),
        emfg_edges: emfg.edge_count(),
        emfg_transfers: emfg.transfer_count(),
        emfg_total_eos: emfg.total_weight().to_string(),
        eacg_nodes: eacg.node_count(),
        eacg_edges: eacg.edge_count(),
        eacg_roots: eacg.roots().len(),
        eacg_max_depth: eacg.max_depth(),
        eacg_is_forest: eacg.is_forest(),
        ecig_nodes: ecig.node_count(),
        ecig_edges: ecig.edge_count(),
        ecig_invocations: ecig.total_invocations(),
        ecig_contracts: ecig.contracts().len(),
        silent_accounts: silent.len(),
    };
    out.json(GRAPHS_JSON, &summary)?;
    println!(
        "EMFG {} nodes / {} edges, EACG {} nodes (max depth {}), ECIG {} nodes / {} edges, {} silent",
        summary.emfg_nodes,
        summary.emfg_edges,
        summary.eacg_nodes,
        summary.eacg_max_depth,
        summary.ecig_nodes,
        summary.ecig_edges,
        summary.silent_accounts
    );
    Ok(finish(&out, false))
}

/// Generic edge list: header row, then `from,to[,weight]`.
fn read_edge_list(path: &Path) -> Result<Digraph> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut ids: BTreeMap<AccountName, u32> = BTreeMap::new();
    let mut raw = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| rec.get(k).map(str::trim).filter(|s| !s.is_empty());
        let (Some(a), Some(b)) = (field(0), field(1)) else {
            bail!("{}:{}: expected from,to[,weight]", path.display(), i + 2);
        };
        let w = match field(2) {
            Some(s) => s.parse::<f64>().with_context(|| format!("{}:{}: bad weight", path.display(), i + 2))?,
            None => 1.0,
        };
        let a = AccountName::new(a)?;
        let b = AccountName::new(b)?;
        ids.insert(a.clone(), 0);
        ids.insert(b.clone(), 0);
        raw.push((a, b, w));
    }
    names_to_digraph(ids, raw)
}

fn names_to_digraph(mut ids: BTreeMap<AccountName, u32>, raw: Vec<(AccountName, AccountName, f64)>) -> Result<Digraph> {
    for (i, v) in ids.values_mut().enumerate() {
        *v = i as u32;
    }
    let edges: Vec<(u32, u32, f64)> = raw.iter().map(|(a, b, w)| (ids[a], ids[b], *w)).collect();
    Ok(Digraph::from_edges(ids.into_keys().collect(), edges))
}

fn read_eacg_digraph(path: &Path) -> Result<Digraph> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut ids = BTreeMap::new();
    let mut raw = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let a = AccountName::new(rec.get(0).unwrap_or_default())?;
        let b = AccountName::new(rec.get(1).unwrap_or_default())?;
        ids.insert(a.clone(), 0);
        ids.insert(b.clone(), 0);
        raw.push((a, b, 1.0));
    }
    names_to_digraph(ids, raw)
}

pub struct MetricsOpts {
    pub edges: Option<PathBuf>,
    pub graphs: Option<PathBuf>,
    pub top: usize,
    pub weighted_clustering: bool,
}

pub fn metrics(data: &DataArgs, opts: &MetricsOpts, out_dir: &Path) -> Result<Outcome> {
    let named: Vec<(&str, Digraph)> = if let Some(p) = &opts.edges {
        vec![("edges", read_edge_list(p)?)]
    } else if let Some(dir) = &opts.graphs {
        let mut v = vec![("EMFG", read_emfg_csv(&dir.join("emfg_edges.csv"))?.to_digraph())];
        let eacg = dir.join("eacg_edges.csv");
        if eacg.exists() {
            v.push(("EACG", read_eacg_digraph(&eacg)?));
        }
        v.push(("ECIG", read_ecig_csv(&dir.join("ecig_edges.csv"))?.to_digraph()));
        v
    } else {
        if data.trace.is_none() && data.data.is_none() {
            bail!("missing input: --edges, --graphs or --trace (or --data) is required");
        }
        let ds = Dataset::load(data, false)?;
        let g = Graphs::build(&ds);
        vec![
            ("EMFG", g.set.emfg.to_digraph()),
            ("EACG", g.set.eacg.to_digraph()),
            ("ECIG", g.set.ecig.to_digraph()),
        ]
    };

    let reports: Vec<(&str, MetricsReport)> = named
        .iter()
        .map(|(n, g)| (*n, MetricsReport::compute(g, opts.weighted_clustering)))
        .collect();
    let mut out = OutDir::create(out_dir)?;

    #[derive(Serialize)]
    struct Row<'a> {
        graph: &'a str,
        #[serde(flatten)]
        report: &'a MetricsReport,
    }
    // flatten is not supported by the csv serializer, so the CSV is written by hand
    let mut w = out.writer("metrics.csv")?;
    writeln!(w, "graph,nodes,edges,clustering,assortativity,pearson_in_out,scc_count,largest_scc,wcc_count,largest_wcc")?;
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
    for (n, r) in &reports {
        writeln!(
            w,
            "{n},{},{},{},{},{},{},{},{},{}",
            r.nodes,
            r.edges,
            opt(r.clustering),
            opt(r.assortativity),
            opt(r.pearson_in_out),
            r.scc_count,
            r.largest_scc,
            r.wcc_count,
            r.largest_wcc
        )?;
    }
    w.flush()?;
    let rows: Vec<Row> = reports.iter().map(|(n, r)| Row { graph: n, report: r }).collect();
    out.json(METRICS_JSON, &rows)?;
    let table = render_table(&reports.iter().map(|(n, r)| (*n, r)).collect::<Vec<_>>());
    out.text("metrics.txt", &table)?;

    #[derive(Serialize)]
    struct Rank<'a> {
        graph: &'a str,
        rank: usize,
        account: &'a str,
        score: f64,
    }
    #[derive(Serialize)]
    struct Deg<'a> {
        graph: &'a str,
        direction: &'a str,
        rank: usize,
        account: String,
        degree: usize,
    }
    let mut ranks = Vec::new();
    let mut degs = Vec::new();
    for (n, g) in &named {
        let pr = pagerank(g, &PageRankConfig::default())?;
        let mut order: Vec<u32> = (0..g.node_count() as u32).collect();
        order.sort_by(|&a, &b| pr[b as usize].total_cmp(&pr[a as usize]).then_with(|| g.name(a).cmp(g.name(b))));
        for (i, &u) in order.iter().take(opts.top).enumerate() {
            ranks.push(Rank { graph: n, rank: i + 1, account: g.name(u).as_str(), score: pr[u as usize] });
        }
        for (dir, label) in [(Direction::In, "in"), (Direction::Out, "out")] {
            for (i, (a, d)) in top_k_by_degree(g, opts.top, dir).into_iter().enumerate() {
                degs.push(Deg { graph: n, direction: label, rank: i + 1, account: a.to_string(), degree: d });
            }
        }
    }
    out.csv("pagerank_top.csv", ranks)?;
    out.csv("degree_top.csv", degs)?;
    println!("{table}");
    Ok(finish(&out, false))
}

pub fn bots_detect(data: &DataArgs, bots: &BotArgs, model: Option<&Path>, out_dir: &Path) -> Result<Outcome> {
    let fixed = bots.fixed_box()?;
    let ds = Dataset::load(data, fixed.is_none())?;
    let g = Graphs::build(&ds);
    let ctx = g.ctx(&ds);
    let mut out = OutDir::create(out_dir)?;
    out.json(RUN_CONFIG_JSON, &data.run_config("bots detect").with_bots(bots))?;

    #[derive(Serialize)]
    struct Cal {
        source: &'static str,
        threshold: SimilarityThreshold,
        time_box: (f64, f64),
        target_box: (f64, f64),
        bot_communities: usize,
        normal_communities: usize,
        normal_means: Option<(f64, f64)>,
    }
    let cal = match fixed {
        Some(t) => Cal {
            source: "flag",
            threshold: t,
            time_box: t.time_box(),
            target_box: t.target_box(),
            bot_communities: 0,
            normal_communities: 0,
            normal_means: None,
        },
        None => {
            let c = calibrate_from_registry(&ctx)
                .context("calibration needs at least two labeled bot communities; pass --similarity-box instead")?;
            Cal {
                source: "registry",
                threshold: c.threshold,
                time_box: c.threshold.time_box(),
                target_box: c.threshold.target_box(),
                bot_communities: c.bot_communities.len(),
                normal_communities: c.normal_communities.len(),
                normal_means: c.normal_means(),
            }
        }
    };
    out.json("calibration.json", &cal)?;

    let forest = model.map(ForestModel::load).transpose()?;
    let report = detect_bots(&ctx, &cal.threshold, &bots.config(), forest.as_ref());

    #[derive(Serialize)]
    struct CommunityRow<'a> {
        controller: &'a str,
        size: usize,
        members: usize,
        silent: usize,
        dist_t: Option<f64>,
        dist_s: Option<f64>,
        shared_pubkeys: usize,
        flagged: bool,
    }
    out.csv(
        "communities.csv",
        report.scan.communities.iter().map(|c| CommunityRow {
            controller: c.controller.as_str(),
            size: c.size,
            members: c.members.len(),
            silent: c.silent,
            dist_t: c.dist_t,
            dist_s: c.dist_s,
            shared_pubkeys: c.shared_pubkeys.len(),
            flagged: c.flagged,
        }),
    )?;
    let mut w = out.writer("verdicts.ndjson")?;
    write_verdicts(&report.verdicts, &mut w)?;
    w.flush()?;

    #[derive(Serialize)]
    struct VecRow<'a> {
        account: &'a str,
        controller: &'a str,
        time: &'a [(u32, f64)],
        target: &'a [(u32, f64)],
    }
    let mut w = out.writer("vectors.ndjson")?;
    for c in report.scan.flagged() {
        for m in &c.members {
            if let Some(v) = g.space.vectors(m.as_str(), &g.activity) {
                let row = VecRow { account: m.as_str(), controller: c.controller.as_str(), time: &v.time, target: &v.target };
                serde_json::to_writer(&mut w, &row)?;
                w.write_all(b"\n")?;
            }
        }
    }
    w.flush()?;

    let mut by_source: BTreeMap<String, usize> = BTreeMap::new();
    let mut per_comm: BTreeMap<String, usize> = BTreeMap::new();
    for v in report.bots() {
        let s = serde_json::to_value(v.source)?;
        *by_source.entry(s.as_str().unwrap_or_default().to_string()).or_default() += 1;
        if let Some(c) = &v.community_id {
            *per_comm.entry(c.clone()).or_default() += 1;
        }
    }
    let summary = BotSummary {
        shortlist: report.shortlist.len(),
        scored_communities: report.scan.communities.len(),
        flagged_communities: report.scan.flagged().count(),
        merged_communities: report.merged.communities.len(),
        bot_accounts: report.bots().count(),
        by_source,
        categories: report.category_counts().into_iter().map(|(k, v)| (k.as_str().to_string(), v)).collect(),
        communities: per_comm.into_iter().collect(),
    };
    out.json(BOTS_JSON, &summary)?;
    println!(
        "{} creators shortlisted, {} communities flagged, {} bot accounts",
        summary.shortlist, summary.flagged_communities, summary.bot_accounts
    );
    for (k, v) in &summary.categories {
        println!("  {k:<15} {v}");
    }
    Ok(finish(&out, summary.bot_accounts > 0))
}

pub struct ClassifyOpts {
    pub model: Option<PathBuf>,
    pub seed: u64,
    pub split: f64,
    pub single: bool,
    pub accounts: Option<PathBuf>,
}

pub fn bots_classify(data: &DataArgs, opts: &ClassifyOpts, out_dir: &Path) -> Result<Outcome> {
    let ds = Dataset::load(data, opts.model.is_none())?;
    let g = Graphs::build(&ds);
    let ctx = g.ctx(&ds);
    let mut out = OutDir::create(out_dir)?;
    let mut rc = data.run_config("bots classify");
    rc.seed = Some(opts.seed);
    out.json(RUN_CONFIG_JSON, &rc)?;

    let model = match &opts.model {
        Some(p) => ForestModel::load(p)?,
        None => {
            let (_, feats, labels) = labeled_features(&ctx);
            if !(labels.contains(&true) && labels.contains(&false)) {
                bail!("missing input: the registry must label both bot and normal communities to train; pass --model to use a saved model");
            }
            let x: Vec<Vec<f64>> = feats.iter().map(|f| f.to_array().to_vec()).collect();
            let grid = if opts.single { GridSpec::single(ForestParams { n_trees: 100, max_depth: None, min_leaf: 1 }) } else { GridSpec::default() };
            let m = train_classifier(&x, &labels, opts.split, opts.seed, &grid)?;
            let p = out.path("model.json");
            m.save(&p)?;
            out.written.push(p);
            m
        }
    };

    let accounts: Vec<AccountName> = match &opts.accounts {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let set: BTreeSet<AccountName> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(AccountName::new)
                .collect::<std::result::Result<_, _>>()?;
            set.into_iter().collect()
        }
        None => {
            let labeled = ds.registry.labels();
            ds.snapshot.accounts.keys().filter(|a| !labeled.contains_key(a)).cloned().collect()
        }
    };
    let verdicts = classify_accounts(&ctx, &model, &accounts);
    let mut w = out.writer("classified.ndjson")?;
    write_verdicts(&verdicts, &mut w)?;
    w.flush()?;

    #[derive(Serialize)]
    struct Summary {
        test_accuracy: f64,
        train_size: usize,
        test_size: usize,
        classified: usize,
        bots: usize,
    }
    let bots = verdicts.iter().filter(|v| v.is_bot).count();
    out.json(
        CLASSIFY_JSON,
        &Summary {
            test_accuracy: model.test_accuracy,
            train_size: model.train_size,
            test_size: model.test_size,
            classified: verdicts.len(),
            bots,
        },
    )?;
    println!(
        "model held-out accuracy {:.4}; {} of {} accounts classified as bots",
        model.test_accuracy,
        bots,
        verdicts.len()
    );
    Ok(finish(&out, bots > 0))
}

pub fn perms_audit(data: &DataArgs, top: usize, out_dir: &Path) -> Result<Outcome> {
    let ds = Dataset::load(data, false)?;
    let scan = scan_updateauth(&ds.trace.actions, &ds.window);
    let (findings, warnings) = detect_misuse(&scan.history, &ds.snapshot);
    let mut out = OutDir::create(out_dir)?;
    out.json(RUN_CONFIG_JSON, &data.run_config("perms audit"))?;
    write_findings_csv(&findings, out.writer("grants.csv")?)?;
    let misuse: Vec<_> = findings.iter().filter(|f| f.severity == Severity::Misuse).cloned().collect();
    write_findings_csv(&misuse, out.writer("misuse.csv")?)?;
    out.ndjson("diagnostics.ndjson", &scan.diagnostics)?;
    let s = summarize(&scan, &findings);
    let summary = PermSummary {
        updateauth_actions: s.updateauth_actions,
        grant_actions: s.grant_actions,
        misuse_actions: s.misuse_actions,
        partial_actions: s.partial_actions,
        benign_actions: findings.iter().filter(|f| f.severity == Severity::Benign).count(),
        misuse_pairs: s.misuse_pairs,
        misuse_granters: s.misuse_granters,
        active_grants: scan.active_grants().count(),
        top_grantees: top_grantees(&findings, top)
            .into_iter()
            .map(|(permission, g, n)| GranteeRow { permission, grantee: g.to_string(), granters: n })
            .collect(),
        warnings: warnings.len(),
    };
    out.json(PERMS_JSON, &summary)?;
    println!(
        "{} updateauth actions, {} eosio.code grants, {} misuse ({} pairs), {} partial",
        summary.updateauth_actions, summary.grant_actions, summary.misuse_actions, summary.misuse_pairs, summary.partial_actions
    );
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(finish(&out, summary.misuse_actions > 0))
}

pub fn attacks_scan(data: &DataArgs, attacks: &AttackArgs, bundles: bool, out_dir: &Path) -> Result<Outcome> {
    let ds = Dataset::load(data, false)?;
    let cfg = attacks.config();
    let inputs = AttackInputs {
        actions: &ds.trace.actions,
        transfers: &ds.transfers,
        registry: &ds.registry,
        window: &ds.window,
        rollback: ds.rollback.as_ref(),
    };
    let report = scan_attacks(&inputs, &cfg)?;
    let mut out = OutDir::create(out_dir)?;
    out.json(RUN_CONFIG_JSON, &data.run_config("attacks scan").with_attacks(attacks))?;
    let mut w = out.writer(FINDINGS_NDJSON)?;
    write_findings(&report.findings, &mut w)?;
    w.flush()?;

    #[derive(Serialize)]
    struct Sus<'a> {
        account: &'a str,
        granularity: String,
        index: u32,
        received: String,
        sent: String,
        profit: String,
        ratio: String,
        victim: &'a str,
        victim_net: String,
    }
    out.csv(
        "suspicious.csv",
        report.suspicious.iter().map(|s| Sus {
            account: s.account.as_str(),
            granularity: format!("{:?}", s.granularity).to_lowercase(),
            index: s.index,
            received: s.received.to_string(),
            sent: s.sent.to_string(),
            profit: s.profit.to_string(),
            ratio: s.ratio.to_string(),
            victim: s.victim.as_ref().map_or("", |v| v.as_str()),
            victim_net: s.victim_net.to_string(),
        }),
    )?;
    out.ndjson("diagnostics.ndjson", &report.diagnostics)?;

    if bundles && !report.findings.is_empty() {
        let by_seq: HashMap<u64, _> = ds.trace.actions.iter().map(|a| (a.global_seq, a)).collect();
        let root = out.path("bundles");
        std::fs::create_dir_all(&root)?;
        for f in &report.findings {
            write_bundle(f, &by_seq, &root)?;
        }
        out.written.push(root);
    }

    let mut by_kind: BTreeMap<String, usize> = BTreeMap::new();
    for k in [AttackKind::FakeTransfer, AttackKind::FakeNotice, AttackKind::PredictableState] {
        by_kind.insert(k.to_string(), report.count(k));
    }
    let summary = AttackSummary {
        findings: report.findings.len(),
        by_kind,
        attackers: report.findings.iter().map(|f| &f.attacker).collect::<BTreeSet<_>>().len(),
        victims: report.findings.iter().map(|f| &f.victim).collect::<BTreeSet<_>>().len(),
        suspicious_windows: report.suspicious.len(),
        fake_notice_insufficient_data: report.fake_notice_insufficient_data,
        diagnostics: report.diagnostics.len(),
    };
    out.json(ATTACKS_JSON, &summary)?;
    println!("{} findings from {} attackers", summary.findings, summary.attackers);
    for (k, v) in &summary.by_kind {
        println!("  {k:<18} {v}");
    }
    Ok(finish(&out, summary.findings > 0))
}

/// SHA-256 over every file under `dir`, in path order, with its relative path.
pub fn dir_digest(dir: &Path) -> Result<(String, Vec<(String, String)>)> {
    fn walk(dir: &Path, acc: &mut Vec<PathBuf>) -> std::io::Result<()> {
        for e in std::fs::read_dir(dir)? {
            let p = e?.path();
            if p.is_dir() {
                walk(&p, acc)?;
            } else {
                acc.push(p);
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    walk(dir, &mut files)?;
    let mut rel: Vec<(String, PathBuf)> = files
        .into_iter()
        .map(|p| (p.strip_prefix(dir).unwrap_or(&p).to_string_lossy().replace('\\', "/"), p))
        .filter(|(r, _)| r != "SHA256SUMS")
        .collect();
    rel.sort();
    let mut all = Sha256::new();
    let mut each = Vec::new();
    for (r, p) in rel {
        let bytes = std::fs::read(&p).with_context(|| format!("reading {}", p.display()))?;
        let h = hex::encode(Sha256::digest(&bytes));
        all.update(r.as_bytes());
        all.update([0]);
        all.update(h.as_bytes());
        all.update([b'\n']);
        each.push((r, h));
    }
    Ok((hex::encode(all.finalize()), each))
}

pub fn synth_generate(seed: Option<u64>, preset: &str, config: Option<&Path>, out_dir: &Path) -> Result<Outcome> {
    let cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let mut c: ScenarioConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            if let Some(s) = seed {
                c.seed = s;
            }
            c
        }
        None => ScenarioConfig::preset(preset, seed.unwrap_or(0))?,
    };
    let chain = generate(&cfg)?;
    let mut out = OutDir::create(out_dir)?;
    chain.write_dir(out_dir)?;
    let (digest, each) = dir_digest(out_dir)?;
    let body: String = each.iter().map(|(r, h)| format!("{h}  {r}\n")).collect();
    out.text("SHA256SUMS", &body)?;
    let s = &chain.truth.stats;
    println!(
        "generated {} actions ({} transfers, {} invocations) over {} days; {} bots, {} attacks, {} grants",
        s.action_count,
        s.transfer_count,
        s.invocation_count,
        chain.window.day_count(),
        chain.truth.bots().len(),
        chain.truth.attacks.len(),
        chain.truth.grants.len()
    );
    println!("sha256 {digest}");
    Ok(finish(&out, false))
}
