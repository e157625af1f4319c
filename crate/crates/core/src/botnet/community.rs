//! Community-level detection: creator shortlist, group similarity, public-key merge.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::similarity::{group_distance, SimilarityThreshold};
use super::vectors::VectorSpace;
use crate::graph::{ActivityIndex, Eacg};
use crate::model::{AccountName, Snapshot};

/// Creators whose EACG out-degree is strictly greater than `min_children`.
pub fn shortlist_creators(eacg: &Eacg, min_children: usize) -> Vec<AccountName> {
    (0..eacg.node_count() as u32)
        .filter(|&u| eacg.children(u).len() > min_children)
        .map(|u| eacg.name(u).clone())
        .collect()
}

/// Candidate members of a controller's community: direct children, or every
/// descendant when `descendants` is set.
pub fn candidate_members(eacg: &Eacg, controller: &str, descendants: bool) -> Vec<AccountName> {
    let Some(u) = eacg.index_of(controller) else {
        return Vec::new();
    };
    let ids = if descendants {
        eacg.descendants(u)
    } else {
        eacg.children(u).to_vec()
    };
    let mut names: Vec<AccountName> = ids.into_iter().map(|i| eacg.name(i).clone()).collect();
    names.sort();
    names
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityStats {
    pub controller: AccountName,
    /// Candidate count before silent members are removed.
    pub size: usize,
    /// Non-silent members.
    pub members: Vec<AccountName>,
    pub silent: usize,
    pub dist_t: Option<f64>,
    pub dist_s: Option<f64>,
    /// Active keys held by at least two candidates.
    pub shared_pubkeys: BTreeSet<String>,
    pub flagged: bool,
}

impl CommunityStats {
    pub fn distances(&self) -> Option<(f64, f64)> {
        Some((self.dist_t?, self.dist_s?))
    }
}

/// Similarity statistics for one candidate set.
pub fn community_stats(
    controller: &AccountName,
    candidates: &[AccountName],
    space: &VectorSpace,
    activity: &ActivityIndex,
    snapshot: Option<&Snapshot>,
) -> CommunityStats {
    let mut members = Vec::new();
    let mut vecs = Vec::new();
    for a in candidates {
        if let Some(v) = space.vectors(a.as_str(), activity) {
            members.push(a.clone());
            vecs.push(v);
        }
    }
    let times: Vec<_> = vecs.iter().map(|v| &v.time).collect();
    let targets: Vec<_> = vecs.iter().map(|v| &v.target).collect();
    let mut key_count: BTreeMap<&str, usize> = BTreeMap::new();
    if let Some(s) = snapshot {
        for a in candidates {
            if let Some(rec) = s.get(a.as_str()) {
                for k in rec.active_keys() {
                    *key_count.entry(k).or_insert(0) += 1;
                }
            }
        }
    }
    CommunityStats {
        controller: controller.clone(),
        size: candidates.len(),
        silent: candidates.len() - members.len(),
        members,
        dist_t: group_distance(&times, space.time_dim()),
        dist_s: group_distance(&targets, space.target_dim()),
        shared_pubkeys: key_count
            .into_iter()
            .filter(|&(_, c)| c >= 2)
            .map(|(k, _)| k.to_string())
            .collect(),
        flagged: false,
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CommunityScan {
    pub communities: Vec<CommunityStats>,
    /// Controllers whose candidates are all silent.
    pub skipped: Vec<(AccountName, String)>,
}

impl CommunityScan {
    pub fn flagged(&self) -> impl Iterator<Item = &CommunityStats> {
        self.communities.iter().filter(|c| c.flagged)
    }
}

/// Score each shortlisted controller's community and flag those inside the box.
pub fn detect_communities(
    eacg: &Eacg,
    shortlist: &[AccountName],
    space: &VectorSpace,
    activity: &ActivityIndex,
    snapshot: Option<&Snapshot>,
    threshold: &SimilarityThreshold,
    descendants: bool,
) -> CommunityScan {
    let stats: Vec<CommunityStats> = shortlist
        .par_iter()
        .map(|c| {
            let cands = candidate_members(eacg, c.as_str(), descendants);
            let mut s = community_stats(c, &cands, space, activity, snapshot);
            s.flagged = s
                .distances()
                .is_some_and(|(t, d)| threshold.contains(t, d));
            s
        })
        .collect();
    let mut scan = CommunityScan::default();
    for s in stats {
        if s.members.is_empty() {
            scan.skipped
                .push((s.controller.clone(), "all members silent".to_string()));
        } else {
            scan.communities.push(s);
        }
    }
    scan
}

/// Result of grouping flagged accounts by shared active keys.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MergedCommunities {
    /// community id → members
    pub communities: BTreeMap<String, BTreeSet<AccountName>>,
    /// Accounts that were not flagged but share an active key with a flagged account.
    pub added: BTreeSet<AccountName>,
}

impl MergedCommunities {
    pub fn community_of(&self, account: &str) -> Option<&str> {
        self.communities
            .iter()
            .find(|(_, m)| m.contains(account))
            .map(|(id, _)| id.as_str())
    }

    /// account → community id
    pub fn membership(&self) -> BTreeMap<AccountName, String> {
        self.communities
            .iter()
            .flat_map(|(id, m)| m.iter().map(move |a| (a.clone(), id.clone())))
            .collect()
    }
}

/// Union-find over flagged accounts: accounts start in the group given by
/// `flagged` (account → initial group label, e.g. the controller) and groups
/// are joined whenever two accounts share an active public key. With `expand`,
/// unflagged snapshot accounts holding one of those keys are pulled in.
///
/// Each merged community is named after its smallest initial label.
pub fn merge_by_pubkey(
    flagged: &BTreeMap<AccountName, String>,
    snapshot: &Snapshot,
    expand: bool,
) -> MergedCommunities {
    let mut key_holders: BTreeMap<&str, Vec<&AccountName>> = BTreeMap::new();
    for rec in snapshot.accounts.values() {
        for k in rec.active_keys() {
            key_holders.entry(k).or_default().push(&rec.name);
        }
    }

    let mut nodes: Vec<AccountName> = flagged.keys().cloned().collect();
    let mut added = BTreeSet::new();
    if expand {
        for a in flagged.keys() {
            if let Some(rec) = snapshot.get(a.as_str()) {
                for k in rec.active_keys() {
                    for &h in &key_holders[k] {
                        if !flagged.contains_key(h) {
                            added.insert(h.clone());
                        }
                    }
                }
            }
        }
        nodes.extend(added.iter().cloned());
        nodes.sort();
    }
    let index: BTreeMap<&AccountName, usize> = nodes.iter().enumerate().map(|(i, a)| (a, i)).collect();

    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };

    let mut first_in_group: BTreeMap<&str, usize> = BTreeMap::new();
    for (a, g) in flagged {
        let i = index[a];
        match first_in_group.get(g.as_str()) {
            Some(&j) => union(&mut parent, i, j),
            None => {
                first_in_group.insert(g.as_str(), i);
            }
        }
    }
    for holders in key_holders.values() {
        let present: Vec<usize> = holders.iter().filter_map(|h| index.get(h).copied()).collect();
        for w in present.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
    }

    let mut groups: BTreeMap<usize, BTreeSet<AccountName>> = BTreeMap::new();
    for i in 0..nodes.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().insert(nodes[i].clone());
    }
    let communities = groups
        .into_values()
        .map(|members| {
            let id = members
                .iter()
                .filter_map(|m| flagged.get(m))
                .min()
                .cloned()
                .unwrap_or_else(|| members.iter().next().expect("non-empty").to_string());
            (id, members)
        })
        .collect();
    MergedCommunities { communities, added }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{name, parse_timestamp, AccountRecord, Authority};

    fn acct(n: &str, key: &str) -> AccountRecord {
        AccountRecord {
            name: name(n),
            creator: None,
            created_at: parse_timestamp("2018-06-09T00:00:00Z").unwrap(),
            permissions: BTreeMap::from([("active".to_string(), Authority::single_key(key))]),
            contract: false,
        }
    }

    #[test]
    fn shared_key_merges() {
        let s = Snapshot::from_records([acct("a", "K1"), acct("b", "K1"), acct("c", "K2")]).unwrap();
        let flagged = BTreeMap::from([
            (name("a"), "x".to_string()),
            (name("b"), "y".to_string()),
            (name("c"), "z".to_string()),
        ]);
        let m = merge_by_pubkey(&flagged, &s, false);
        assert_eq!(m.communities.len(), 2);
        assert_eq!(m.community_of("b"), Some("x"));
        assert_eq!(m.community_of("c"), Some("z"));
    }

    #[test]
    fn expansion_pulls_key_holders() {
        let s = Snapshot::from_records([acct("a", "K1"), acct("b", "K1"), acct("c", "K2")]).unwrap();
        let flagged = BTreeMap::from([(name("a"), "a".to_string())]);
        let m = merge_by_pubkey(&flagged, &s, true);
        assert_eq!(m.added, BTreeSet::from([name("b")]));
        assert_eq!(m.communities["a"].len(), 2);
        assert_eq!(merge_by_pubkey(&flagged, &s, false).communities["a"].len(), 1);
    }
}
