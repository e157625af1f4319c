use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, ValueEnum};
use eosio_forensics::attacks::{Granularity, ScanConfig};
use eosio_forensics::botnet::{BotConfig, CategorizeConfig, SimilarityThreshold};
use eosio_forensics::model::{Amount, ObservationWindow};
use serde::{Deserialize, Serialize};

pub const DEFAULT_MIN_CHILDREN: usize = 30;
pub const DEFAULT_W1: f64 = 400.0;
pub const DEFAULT_W2: f64 = 1.2;
pub const DEFAULT_W3: f64 = 0.9;
pub const DEFAULT_CLICK_RATIO: f64 = 0.95;
pub const DEFAULT_BONUS_FRACTION: f64 = 0.5;

/// Input locations shared by every stage that reads chain data.
#[derive(Args, Debug, Clone, Default)]
pub struct DataArgs {
    /// Directory laid out like `synth generate` output; fills in any input not given explicitly.
    #[arg(long, env = "EOSF_DATA")]
    pub data: Option<PathBuf>,
    /// Action trace, one JSON record per line.
    #[arg(long, env = "EOSF_TRACE")]
    pub trace: Option<PathBuf>,
    /// Account snapshot, one JSON record per line.
    #[arg(long, env = "EOSF_SNAPSHOT")]
    pub snapshot: Option<PathBuf>,
    /// Registry directory (dapps.csv, incentives.csv, labels.csv, sellers.csv).
    #[arg(long, env = "EOSF_REGISTRY")]
    pub registry: Option<PathBuf>,
    /// Rollback log, one JSON record per line.
    #[arg(long, env = "EOSF_ROLLBACK")]
    pub rollback: Option<PathBuf>,
    /// First day of the observation window (YYYY-MM-DD).
    #[arg(long, env = "EOSF_START_DAY")]
    pub start_day: Option<NaiveDate>,
    /// Last day of the observation window, inclusive.
    #[arg(long, env = "EOSF_END_DAY")]
    pub end_day: Option<NaiveDate>,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output directory; created if missing.
    #[arg(long, env = "EOSF_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BotArgs {
    /// Creators with strictly more children than this are examined.
    #[arg(long, env = "EOSF_MIN_CHILDREN", default_value_t = DEFAULT_MIN_CHILDREN)]
    pub min_children: usize,
    #[arg(long, env = "EOSF_CLICK_RATIO", default_value_t = DEFAULT_CLICK_RATIO)]
    pub click_ratio: f64,
    #[arg(long, env = "EOSF_BONUS_FRACTION", default_value_t = DEFAULT_BONUS_FRACTION)]
    pub bonus_fraction: f64,
    /// Use every descendant of a controller, not only direct children.
    #[arg(long)]
    pub descendants: bool,
    /// Skip pulling key-sharing accounts into merged communities.
    #[arg(long)]
    pub no_pubkey_merge: bool,
    /// Fixed similarity box as MEAN_T,SD_T,MEAN_S,SD_S instead of calibrating from labels.
    #[arg(long, env = "EOSF_SIMILARITY_BOX", value_delimiter = ',', value_names = ["MEAN_T,SD_T,MEAN_S,SD_S"])]
    pub similarity_box: Option<Vec<f64>>,
}

impl BotArgs {
    pub fn config(&self) -> BotConfig {
        BotConfig {
            min_children: self.min_children,
            descendants: self.descendants,
            expand_by_pubkey: !self.no_pubkey_merge,
            categorize: CategorizeConfig {
                click_ratio: self.click_ratio,
                bonus_fraction: self.bonus_fraction,
                ..CategorizeConfig::default()
            },
        }
    }

    pub fn fixed_box(&self) -> anyhow::Result<Option<SimilarityThreshold>> {
        match self.similarity_box.as_deref() {
            None => Ok(None),
            Some(&[mean_t, sd_t, mean_s, sd_s]) => Ok(Some(SimilarityThreshold { mean_t, sd_t, mean_s, sd_s })),
            Some(v) => anyhow::bail!("--similarity-box takes 4 comma-separated values, got {}", v.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Day,
    Hour,
}

#[derive(Args, Debug, Clone)]
pub struct AttackArgs {
    /// Minimum window profit in EOS.
    #[arg(long, env = "EOSF_W1", default_value_t = DEFAULT_W1)]
    pub w1: f64,
    /// Minimum received/sent ratio.
    #[arg(long, env = "EOSF_W2", default_value_t = DEFAULT_W2)]
    pub w2: f64,
    /// Minimum share of lifetime income from the victim that was window profit.
    #[arg(long, env = "EOSF_W3", default_value_t = DEFAULT_W3)]
    pub w3: f64,
    #[arg(long, env = "EOSF_GRANULARITY", value_enum, value_delimiter = ',', default_values = ["day", "hour"])]
    pub granularity: Vec<GranularityArg>,
}

impl AttackArgs {
    pub fn config(&self) -> ScanConfig {
        ScanConfig {
            w1: Amount((self.w1 * 1e4).round().max(0.0) as u64),
            w2: self.w2,
            w3: self.w3,
            granularities: self
                .granularity
                .iter()
                .map(|g| match g {
                    GranularityArg::Day => Granularity::Day,
                    GranularityArg::Hour => Granularity::Hour,
                })
                .collect(),
        }
    }
}

/// Thresholds of one run, written next to the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub min_children: usize,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub click_ratio: f64,
    pub bonus_fraction: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_children: DEFAULT_MIN_CHILDREN,
            w1: DEFAULT_W1,
            w2: DEFAULT_W2,
            w3: DEFAULT_W3,
            click_ratio: DEFAULT_CLICK_RATIO,
            bonus_fraction: DEFAULT_BONUS_FRACTION,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub trace: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub rollback: Option<PathBuf>,
    pub window: Option<ObservationWindow>,
    pub thresholds: Thresholds,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn with_bots(mut self, b: &BotArgs) -> Self {
        self.thresholds.min_children = b.min_children;
        self.thresholds.click_ratio = b.click_ratio;
        self.thresholds.bonus_fraction = b.bonus_fraction;
        self
    }

    pub fn with_attacks(mut self, a: &AttackArgs) -> Self {
        self.thresholds.w1 = a.w1;
        self.thresholds.w2 = a.w2;
        self.thresholds.w3 = a.w3;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct T {
        #[command(flatten)]
        bots: BotArgs,
        #[command(flatten)]
        attacks: AttackArgs,
    }

    #[test]
    fn defaults() {
        let t = Thresholds::default();
        assert_eq!(t.min_children, 30);
        assert_eq!((t.w1, t.w2, t.w3), (400.0, 1.2, 0.9));
        assert_eq!((t.click_ratio, t.bonus_fraction), (0.95, 0.5));

        let p = T::parse_from(["x"]);
        let scan = p.attacks.config();
        assert_eq!(scan, ScanConfig::default());
        assert_eq!(p.bots.config(), BotConfig::default());
        assert!(p.bots.fixed_box().unwrap().is_none());
    }

    #[test]
    fn box_flag() {
        let p = T::parse_from(["x", "--similarity-box", "0.09,0.08,0.03,0.05", "--granularity", "day"]);
        let b = p.bots.fixed_box().unwrap().unwrap();
        assert_eq!(b.time_box(), (0.0, 0.33));
        assert_eq!(p.attacks.config().granularities, vec![Granularity::Day]);
    }
}
