use serde::{Deserialize, Serialize};

use super::finding::Granularity;
use crate::error::{Error, Result};
use crate::model::Amount;

/// Profit-scan thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Minimum window profit (strictly exceeded).
    pub w1: Amount,
    /// Minimum received/sent ratio (strictly exceeded).
    pub w2: f64,
    /// Minimum share of lifetime income from the victim that was window profit (strictly exceeded).
    pub w3: f64,
    pub granularities: Vec<Granularity>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            w1: Amount::from_tokens(400),
            w2: 1.2,
            w3: 0.9,
            granularities: vec![Granularity::Day, Granularity::Hour],
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.w1 == Amount::ZERO {
            return Err(Error::Config("W1 must be positive".into()));
        }
        if !(self.w2 > 1.0) {
            return Err(Error::Config(format!("W2 must exceed 1, got {}", self.w2)));
        }
        if !(self.w3 > 0.0 && self.w3 <= 1.0) {
            return Err(Error::Config(format!("W3 must lie in (0,1], got {}", self.w3)));
        }
        if self.granularities.is_empty() {
            return Err(Error::Config("at least one granularity is required".into()));
        }
        Ok(())
    }
}
