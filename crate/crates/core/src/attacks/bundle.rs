//! Evidence bundles: a directory per finding with a SHA-256 manifest.
//!
//! ```text
//! <dir>/finding.json     the finding
//! <dir>/actions.ndjson   every referenced action record, by global_seq
//! <dir>/flows.csv        signed attacker/victim transfers; `net` sums to the profit
//! <dir>/signals.json     auxiliary signals (or null)
//! <dir>/MANIFEST.sha256  "<hex>  <file>" per file above
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::finding::AttackFinding;
use crate::error::{Error, Result};
use crate::model::{format_timestamp, ActionRecord, Amount, TransferPayload};

pub const MANIFEST: &str = "MANIFEST.sha256";
const FILES: [&str; 4] = ["finding.json", "actions.ndjson", "flows.csv", "signals.json"];

/// Directory name for a finding: attacker, kind, victim and window start.
pub fn bundle_name(f: &AttackFinding) -> String {
    format!(
        "{}_{}_{}_{}",
        f.attacker,
        f.kind,
        f.victim,
        f.window_start.format("%Y%m%dT%H%M%S")
    )
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Write the bundle for `finding` under `root` and return its directory.
/// Every evidence sequence number must resolve in `actions`.
pub fn write_bundle(finding: &AttackFinding, actions: &HashMap<u64, &ActionRecord>, root: &Path) -> Result<PathBuf> {
    if finding.evidence.is_empty() {
        return Err(Error::Bundle(format!("finding {} has no evidence", bundle_name(finding))));
    }
    let mut records = Vec::with_capacity(finding.evidence.len());
    for seq in &finding.evidence {
        let a = actions
            .get(seq)
            .ok_or_else(|| Error::Bundle(format!("evidence action {seq} missing from trace")))?;
        records.push(*a);
    }

    let mut flows = String::from("global_seq,timestamp,from,to,amount,net\n");
    let mut net_total: i128 = 0;
    for seq in &finding.flow_evidence {
        let a = actions
            .get(seq)
            .ok_or_else(|| Error::Bundle(format!("flow action {seq} missing from trace")))?;
        let Some(TransferPayload { from, to, quantity, .. }) = a.transfer() else {
            return Err(Error::Bundle(format!("flow action {seq} is not a transfer")));
        };
        let signed = if to == &finding.attacker { quantity.amount.0 as i128 } else { -(quantity.amount.0 as i128) };
        net_total += signed;
        let sign = if signed < 0 { "-" } else { "" };
        let _ = writeln!(
            flows,
            "{seq},{},{from},{to},{},{sign}{}",
            format_timestamp(&a.timestamp),
            quantity.amount,
            Amount(signed.unsigned_abs() as u64)
        );
    }
    if net_total != finding.profit.0 as i128 {
        return Err(Error::Bundle(format!(
            "flows of {} sum to {net_total} units, finding reports {}",
            bundle_name(finding),
            finding.profit.0
        )));
    }

    let dir = root.join(bundle_name(finding));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut actions_text = String::new();
    for r in records {
        actions_text.push_str(&r.to_json_line());
        actions_text.push('\n');
    }
    let contents: [(&str, Vec<u8>); 4] = [
        (FILES[0], serde_json::to_vec_pretty(finding)?),
        (FILES[1], actions_text.into_bytes()),
        (FILES[2], flows.into_bytes()),
        (FILES[3], serde_json::to_vec_pretty(&finding.signals)?),
    ];
    let mut manifest = String::new();
    for (name, bytes) in &contents {
        write_file(&dir.join(name), bytes)?;
        let _ = writeln!(manifest, "{}  {name}", sha256_hex(bytes));
    }
    write_file(&dir.join(MANIFEST), manifest.as_bytes())?;
    Ok(dir)
}

/// Recompute every hash listed in the manifest.
pub fn verify_bundle(dir: &Path) -> Result<()> {
    let path = dir.join(MANIFEST);
    let manifest = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut listed = BTreeMap::new();
    for line in manifest.lines() {
        let (hash, name) = line
            .split_once("  ")
            .ok_or_else(|| Error::Bundle(format!("bad manifest line {line:?}")))?;
        listed.insert(name.to_string(), hash.to_string());
    }
    for name in FILES {
        let want = listed
            .get(name)
            .ok_or_else(|| Error::Bundle(format!("{name} not in manifest")))?;
        let p = dir.join(name);
        let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
        if &sha256_hex(&bytes) != want {
            return Err(Error::Bundle(format!("{name} does not match its manifest hash")));
        }
    }
    Ok(())
}
