//! Seeded synthetic chains with planted ground truth.
//!
//! `generate` writes nothing by itself; `SyntheticChain::write_dir` lays the
//! chain out in the same file formats the ingest stage reads:
//!
//! * `trace.ndjson`, `accounts.ndjson`, `registry/`, `rollback.ndjson`
//! * `manifest.json` with the planted ground truth
//! * `scenario.json` with the config that produced it

pub mod config;
pub mod engine;
pub mod labeled;
pub mod manifest;
pub mod scenario;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::{AttackSpec, BotCommunitySpec, BotTemplate, MisuseSpec, ScenarioConfig};
pub use engine::RunStats;
pub use labeled::{labeled_feature_set, BOT_MEANS, NORMAL_MEANS};
pub use manifest::{AttackTruth, ChainTruth, CommunityTruth, GrantTruth, GroundTruth, ServiceTruth};
pub use scenario::{generate, label};

use crate::attacks::{RollbackEntry, RollbackLog};
use crate::error::{Error, Result};
use crate::model::{write_action_trace, ActionRecord, ObservationWindow, Registry, Snapshot};

pub const TRACE_FILE: &str = "trace.ndjson";
pub const ACCOUNTS_FILE: &str = "accounts.ndjson";
pub const REGISTRY_DIR: &str = "registry";
pub const ROLLBACK_FILE: &str = "rollback.ndjson";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SCENARIO_FILE: &str = "scenario.json";

#[derive(Debug, Clone)]
pub struct SyntheticChain {
    pub config: ScenarioConfig,
    pub window: ObservationWindow,
    pub actions: Vec<ActionRecord>,
    pub snapshot: Snapshot,
    pub registry: Registry,
    pub rollback: Vec<RollbackEntry>,
    pub truth: GroundTruth,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

impl SyntheticChain {
    pub fn rollback_log(&self) -> RollbackLog {
        RollbackLog::from_entries(self.rollback.iter().cloned())
    }

    /// Write every artifact under `dir`; returns the files written, sorted.
    pub fn write_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let io = |p: &Path| {
            let p = p.to_path_buf();
            move |e| Error::io(p, e)
        };

        let path = dir.join(TRACE_FILE);
        let mut w = create(&path)?;
        write_action_trace(&mut w, &self.actions).map_err(io(&path))?;
        w.flush().map_err(io(&path))?;

        let path = dir.join(ACCOUNTS_FILE);
        let mut w = create(&path)?;
        self.snapshot.write_ndjson(&mut w).map_err(io(&path))?;
        w.flush().map_err(io(&path))?;

        let path = dir.join(ROLLBACK_FILE);
        let mut w = create(&path)?;
        for e in &self.rollback {
            serde_json::to_writer(&mut w, e)?;
            w.write_all(b"\n").map_err(io(&path))?;
        }
        w.flush().map_err(io(&path))?;

        self.registry.write_dir(&dir.join(REGISTRY_DIR))?;

        for (name, value) in [
            (MANIFEST_FILE, serde_json::to_value(&self.truth)?),
            (SCENARIO_FILE, serde_json::to_value(&self.config)?),
        ] {
            let path = dir.join(name);
            let mut w = create(&path)?;
            serde_json::to_writer_pretty(&mut w, &value)?;
            w.write_all(b"\n").map_err(io(&path))?;
            w.flush().map_err(io(&path))?;
        }

        let mut files = vec![
            dir.join(TRACE_FILE),
            dir.join(ACCOUNTS_FILE),
            dir.join(ROLLBACK_FILE),
            dir.join(MANIFEST_FILE),
            dir.join(SCENARIO_FILE),
        ];
        for f in ["dapps.csv", "incentives.csv", "labels.csv", "sellers.csv"] {
            files.push(dir.join(REGISTRY_DIR).join(f));
        }
        files.sort();
        Ok(files)
    }
}
