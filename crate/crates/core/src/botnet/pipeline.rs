//! The combined bot pipeline: calibration, community detection, per-account
//! classification, public-key merge and categorisation.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::categorize::{BotCategory, CategorizeConfig, Categorizer};
use super::classifier::ForestModel;
use super::community::{
    candidate_members, community_stats, detect_communities, merge_by_pubkey, shortlist_creators, CommunityScan,
    CommunityStats, MergedCommunities,
};
use super::features::{extract_features, AccountFeatures};
use super::similarity::{calibrate_threshold, SimilarityThreshold};
use super::vectors::VectorSpace;
use crate::error::{Error, Result};
use crate::graph::{ActivityIndex, Eacg};
use crate::model::{AccountName, LabeledCommunity, ObservationWindow, Registry, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictSource {
    Community,
    /// Listed as a known account seller in the registry.
    Registry,
    Classifier,
    PubkeyMerge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotVerdict {
    pub account: AccountName,
    pub is_bot: bool,
    pub source: VerdictSource,
    pub community_id: Option<String>,
    pub category: BotCategory,
}

pub fn write_verdicts(verdicts: &[BotVerdict], w: &mut impl Write) -> Result<()> {
    for v in verdicts {
        serde_json::to_writer(&mut *w, v)?;
        w.write_all(b"\n").map_err(|e| Error::io("<verdicts>", e))?;
    }
    Ok(())
}

pub fn read_verdicts(r: impl BufRead) -> Result<Vec<BotVerdict>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| Error::io("<verdicts>", e))?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BotConfig {
    pub min_children: usize,
    pub descendants: bool,
    /// Pull unflagged accounts sharing an active key into merged communities.
    pub expand_by_pubkey: bool,
    pub categorize: CategorizeConfig,
}

impl Default for BotConfig {
    fn default() -> Self {
        BotConfig {
            min_children: 30,
            descendants: false,
            expand_by_pubkey: true,
            categorize: CategorizeConfig::default(),
        }
    }
}

/// Immutable inputs shared by every stage.
pub struct BotContext<'a> {
    pub eacg: &'a Eacg,
    pub activity: &'a ActivityIndex,
    pub space: &'a VectorSpace,
    pub snapshot: &'a Snapshot,
    pub registry: &'a Registry,
    pub window: &'a ObservationWindow,
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub threshold: SimilarityThreshold,
    pub bot_communities: Vec<CommunityStats>,
    pub normal_communities: Vec<CommunityStats>,
}

impl Calibration {
    /// Mean `(dist_t, dist_s)` over the labeled normal communities.
    pub fn normal_means(&self) -> Option<(f64, f64)> {
        let d: Vec<(f64, f64)> = self.normal_communities.iter().filter_map(|c| c.distances()).collect();
        (!d.is_empty()).then(|| {
            let n = d.len() as f64;
            (d.iter().map(|x| x.0).sum::<f64>() / n, d.iter().map(|x| x.1).sum::<f64>() / n)
        })
    }
}

fn labeled_stats(ctx: &BotContext<'_>, list: &[LabeledCommunity]) -> Vec<CommunityStats> {
    list.par_iter()
        .map(|c| {
            let members: Vec<AccountName> = c.members.iter().cloned().collect();
            community_stats(&c.controller, &members, ctx.space, ctx.activity, Some(ctx.snapshot))
        })
        .collect()
}

/// Calibrate the similarity box from the registry's labeled communities.
pub fn calibrate_from_registry(ctx: &BotContext<'_>) -> Result<Calibration> {
    let bot_communities = labeled_stats(ctx, &ctx.registry.labeled_bot_communities);
    let normal_communities = labeled_stats(ctx, &ctx.registry.labeled_normal_communities);
    let dists: Vec<(f64, f64)> = bot_communities.iter().filter_map(|c| c.distances()).collect();
    let threshold = calibrate_threshold(&dists)?;
    Ok(Calibration { threshold, bot_communities, normal_communities })
}

/// Features and labels of every labeled account with at least one action.
pub fn labeled_features(ctx: &BotContext<'_>) -> (Vec<AccountName>, Vec<AccountFeatures>, Vec<bool>) {
    let mut rows: Vec<(AccountName, bool)> = Vec::new();
    for (list, label) in [
        (&ctx.registry.labeled_bot_communities, true),
        (&ctx.registry.labeled_normal_communities, false),
    ] {
        for c in list.iter() {
            for m in &c.members {
                if ctx.space.vectors(m.as_str(), ctx.activity).is_some() {
                    rows.push((m.clone(), label));
                }
            }
        }
    }
    rows.sort();
    rows.dedup_by(|a, b| a.0 == b.0);
    let feats = features_for(ctx, rows.iter().map(|r| &r.0));
    let (names, labels) = rows.into_iter().unzip();
    (names, feats, labels)
}

pub fn features_for<'n>(ctx: &BotContext<'_>, accounts: impl Iterator<Item = &'n AccountName>) -> Vec<AccountFeatures> {
    let list: Vec<&AccountName> = accounts.collect();
    list.par_iter()
        .map(|a| extract_features(a.as_str(), ctx.eacg, ctx.activity, ctx.window))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BotReport {
    pub shortlist: Vec<AccountName>,
    pub scan: CommunityScan,
    pub merged: MergedCommunities,
    pub verdicts: Vec<BotVerdict>,
}

impl BotReport {
    pub fn bots(&self) -> impl Iterator<Item = &BotVerdict> {
        self.verdicts.iter().filter(|v| v.is_bot)
    }

    pub fn category_counts(&self) -> BTreeMap<BotCategory, usize> {
        let mut m = BTreeMap::new();
        for v in self.bots() {
            *m.entry(v.category).or_insert(0) += 1;
        }
        m
    }
}

/// Run the full pipeline. Only bot verdicts are returned, sorted by account.
pub fn detect_bots(
    ctx: &BotContext<'_>,
    threshold: &SimilarityThreshold,
    cfg: &BotConfig,
    classifier: Option<&ForestModel>,
) -> BotReport {
    let shortlist = shortlist_creators(ctx.eacg, cfg.min_children);
    let scan = detect_communities(
        ctx.eacg,
        &shortlist,
        ctx.space,
        ctx.activity,
        Some(ctx.snapshot),
        threshold,
        cfg.descendants,
    );

    // account → (source, initial group)
    let mut found: BTreeMap<AccountName, (VerdictSource, String)> = BTreeMap::new();
    for c in scan.flagged() {
        for m in &c.members {
            found
                .entry(m.clone())
                .or_insert((VerdictSource::Community, c.controller.to_string()));
        }
    }
    for s in &ctx.registry.seller_seed {
        found
            .entry(s.clone())
            .or_insert((VerdictSource::Registry, format!("seller-{s}")));
    }
    if let Some(model) = classifier {
        let rest: Vec<&AccountName> = ctx
            .snapshot
            .accounts
            .keys()
            .filter(|a| !found.contains_key(*a) && ctx.space.vectors(a.as_str(), ctx.activity).is_some())
            .collect();
        let feats = features_for(ctx, rest.iter().copied());
        for (a, f) in rest.into_iter().zip(feats) {
            if model.predict(&f.to_array()) {
                found.insert(a.clone(), (VerdictSource::Classifier, a.to_string()));
            }
        }
    }

    let groups: BTreeMap<AccountName, String> = found.iter().map(|(a, (_, g))| (a.clone(), g.clone())).collect();
    let merged = merge_by_pubkey(&groups, ctx.snapshot, cfg.expand_by_pubkey);
    let membership = merged.membership();
    let categorizer = Categorizer::new(ctx.snapshot, ctx.activity, ctx.registry, &merged, cfg.categorize);

    let all: BTreeSet<&AccountName> = found.keys().chain(merged.added.iter()).collect();
    let verdicts = all
        .into_iter()
        .map(|a| BotVerdict {
            account: a.clone(),
            is_bot: true,
            source: found.get(a).map_or(VerdictSource::PubkeyMerge, |f| f.0),
            community_id: membership.get(a).cloned(),
            category: categorizer.categorize(a.as_str()),
        })
        .collect();
    BotReport { shortlist, scan, merged, verdicts }
}

/// One verdict per account from the classifier alone.
pub fn classify_accounts(ctx: &BotContext<'_>, model: &ForestModel, accounts: &[AccountName]) -> Vec<BotVerdict> {
    let feats = features_for(ctx, accounts.iter());
    accounts
        .iter()
        .zip(feats)
        .map(|(a, f)| {
            let is_bot = model.predict(&f.to_array());
            BotVerdict {
                account: a.clone(),
                is_bot,
                source: VerdictSource::Classifier,
                community_id: None,
                category: if is_bot { BotCategory::Other } else { BotCategory::None },
            }
        })
        .collect()
}

/// Candidate members of a shortlisted controller, exposed for reporting.
pub fn community_candidates(ctx: &BotContext<'_>, controller: &str, descendants: bool) -> Vec<AccountName> {
    candidate_members(ctx.eacg, controller, descendants)
}
