use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use eosio_forensics::attacks::RollbackLog;
use eosio_forensics::botnet::{BotContext, VectorSpace};
use eosio_forensics::graph::{ActivityIndex, GraphSet};
use eosio_forensics::model::{
    extract_transfers, parse_account_snapshot, parse_action_trace, ObservationWindow, Registry, Snapshot, Trace,
    Transfer, TransferStats,
};
use eosio_forensics::synth::{ACCOUNTS_FILE, MANIFEST_FILE, REGISTRY_DIR, ROLLBACK_FILE, TRACE_FILE};
use serde::Serialize;

use crate::args::{DataArgs, RunConfig};

impl DataArgs {
    fn resolve(&self, explicit: &Option<PathBuf>, file: &str) -> Option<PathBuf> {
        explicit
            .clone()
            .or_else(|| self.data.as_ref().map(|d| d.join(file)).filter(|p| p.exists()))
    }

    fn require(&self, explicit: &Option<PathBuf>, file: &str, flag: &str) -> Result<PathBuf> {
        self.resolve(explicit, file).ok_or_else(|| match &self.data {
            Some(d) => anyhow!("missing input: --{flag} not given and {} does not exist", d.join(file).display()),
            None => anyhow!("missing input: --{flag} is required (or --data)"),
        })
    }

    pub fn trace_path(&self) -> Result<PathBuf> {
        self.require(&self.trace, TRACE_FILE, "trace")
    }

    pub fn snapshot_path(&self) -> Result<PathBuf> {
        self.require(&self.snapshot, ACCOUNTS_FILE, "snapshot")
    }

    pub fn registry_path(&self) -> Option<PathBuf> {
        self.resolve(&self.registry, REGISTRY_DIR)
    }

    pub fn rollback_path(&self) -> Option<PathBuf> {
        self.resolve(&self.rollback, ROLLBACK_FILE)
    }

    /// Explicit days win; otherwise the window recorded in a data directory's
    /// manifest; otherwise the mainnet window.
    pub fn window(&self) -> Result<ObservationWindow> {
        match (self.start_day, self.end_day) {
            (Some(s), Some(e)) => Ok(ObservationWindow::new(s, e)?),
            (Some(_), None) => bail!("missing input: --end-day is required with --start-day"),
            (None, Some(_)) => bail!("missing input: --start-day is required with --end-day"),
            (None, None) => {
                let manifest = self.data.as_ref().map(|d| d.join(MANIFEST_FILE)).filter(|p| p.exists());
                match manifest {
                    Some(p) => {
                        let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                        let v: serde_json::Value = serde_json::from_str(&text)?;
                        Ok(serde_json::from_value(v["window"].clone())
                            .with_context(|| format!("{}: no window", p.display()))?)
                    }
                    None => Ok(ObservationWindow::mainnet()),
                }
            }
        }
    }

    pub fn run_config(&self, command: &str) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            trace: self.resolve(&self.trace, TRACE_FILE),
            snapshot: self.resolve(&self.snapshot, ACCOUNTS_FILE),
            registry: self.registry_path(),
            rollback: self.rollback_path(),
            window: self.window().ok(),
            ..RunConfig::default()
        }
    }
}

pub struct Dataset {
    pub window: ObservationWindow,
    pub trace: Trace,
    pub snapshot: Snapshot,
    pub registry: Registry,
    pub rollback: Option<RollbackLog>,
    pub transfers: Vec<Transfer>,
    pub transfer_stats: TransferStats,
}

impl Dataset {
    pub fn load(args: &DataArgs, need_registry: bool) -> Result<Self> {
        let window = args.window()?;
        let trace_path = args.trace_path()?;
        let snapshot_path = args.snapshot_path()?;
        let registry = match args.registry_path() {
            Some(p) => Registry::load_dir(&p)?,
            None if need_registry => bail!("missing input: --registry is required (or --data with a registry/ directory)"),
            None => Registry::default(),
        };
        let trace = parse_action_trace(&trace_path, &window)?;
        let snapshot = parse_account_snapshot(&snapshot_path)?;
        let rollback = args.rollback_path().map(|p| RollbackLog::load(&p)).transpose()?;
        let (transfers, transfer_stats) = extract_transfers(&trace.actions, &window);
        Ok(Dataset { window, trace, snapshot, registry, rollback, transfers, transfer_stats })
    }
}

/// The graphs and indexes built over a dataset.
pub struct Graphs {
    pub set: GraphSet,
    pub activity: ActivityIndex,
    pub space: VectorSpace,
}

impl Graphs {
    pub fn build(ds: &Dataset) -> Self {
        let set = GraphSet::build(&ds.trace.actions, &ds.transfers, &ds.snapshot, &ds.window);
        let activity = ActivityIndex::build(&set.emfg, &set.ecig);
        let space = VectorSpace::new(&set.ecig, &ds.window);
        Graphs { set, activity, space }
    }

    pub fn ctx<'a>(&'a self, ds: &'a Dataset) -> BotContext<'a> {
        BotContext {
            eacg: &self.set.eacg,
            activity: &self.activity,
            space: &self.space,
            snapshot: &ds.snapshot,
            registry: &ds.registry,
            window: &ds.window,
        }
    }
}

/// Output directory writer that remembers what it wrote.
pub struct OutDir {
    pub dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutDir { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn writer(&mut self, name: &str) -> Result<BufWriter<File>> {
        let p = self.path(name);
        let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
        self.written.push(p);
        Ok(BufWriter::new(f))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut w = self.writer(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub fn ndjson<'a, T: Serialize + 'a>(&mut self, name: &str, rows: impl IntoIterator<Item = &'a T>) -> Result<()> {
        let mut w = self.writer(name)?;
        for r in rows {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = T>) -> Result<()> {
        let w = self.writer(name)?;
        let mut out = csv::Writer::from_writer(w);
        for r in rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let mut w = self.writer(name)?;
        w.write_all(body.as_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn list(&self) {
        for p in &self.written {
            eprintln!("wrote {}", p.display());
        }
    }
}
