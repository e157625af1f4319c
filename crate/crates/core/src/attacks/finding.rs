use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::signals::Signals;
use crate::error::{Error, Result};
use crate::model::{ts_format, AccountName, Amount, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    FakeTransfer,
    FakeNotice,
    PredictableState,
}

impl AttackKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttackKind::FakeTransfer => "fake_transfer",
            AttackKind::FakeNotice => "fake_notice",
            AttackKind::PredictableState => "predictable_state",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Day,
    Hour,
}

/// Received over sent; infinite when nothing was sent. Serialized as a number
/// or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Ratio(pub f64);

impl Ratio {
    pub fn of(received: Amount, sent: Amount) -> Self {
        if sent == Amount::ZERO {
            Ratio(f64::INFINITY)
        } else {
            Ratio(received.0 as f64 / sent.0 as f64)
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{:.4}", self.0)
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Ratio(x)),
            Raw::Str(s) if s == "inf" => Ok(Ratio(f64::INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad ratio {s:?}"))),
        }
    }
}

/// Amounts written as `"12.3400 EOS"`.
pub mod eos_quantity {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::model::{Amount, Quantity};

    pub fn serialize<S: Serializer>(a: &Amount, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&Quantity::eos(*a).to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Amount, D::Error> {
        let s = String::deserialize(d)?;
        let q: Quantity = s.parse().map_err(serde::de::Error::custom)?;
        Ok(q.amount)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackFinding {
    pub attacker: AccountName,
    pub victim: AccountName,
    pub kind: AttackKind,
    /// Set for profit-scan findings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Granularity>,
    #[serde(with = "ts_format")]
    pub window_start: Timestamp,
    #[serde(with = "ts_format")]
    pub window_end: Timestamp,
    /// Net EOS gained from the victim inside the window(s).
    #[serde(with = "eos_quantity")]
    pub profit: Amount,
    pub profitability_ratio: Ratio,
    /// Share of all EOS ever received from the victim that was profit (predictable-state only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profit_share: Option<f64>,
    /// Supporting `global_seq` values, ascending.
    pub evidence: Vec<u64>,
    /// Genuine transfers between attacker and victim whose signed sum is `profit`.
    pub flow_evidence: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signals: Option<Signals>,
}

impl AttackFinding {
    pub fn sort_key(&self) -> (&AccountName, Timestamp, AttackKind, &AccountName) {
        (&self.attacker, self.window_start, self.kind, &self.victim)
    }
}

pub fn sort_findings(findings: &mut [AttackFinding]) {
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn write_findings(findings: &[AttackFinding], w: &mut impl Write) -> Result<()> {
    for f in findings {
        serde_json::to_writer(&mut *w, f)?;
        w.write_all(b"\n").map_err(|e| Error::io("<findings>", e))?;
    }
    Ok(())
}

pub fn read_findings(r: impl BufRead) -> Result<Vec<AttackFinding>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| Error::io("<findings>", e))?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_ratio_round_trips() {
        let r = Ratio::of(Amount(10), Amount::ZERO);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"inf\"");
        assert!(serde_json::from_str::<Ratio>(&s).unwrap().is_infinite());
        assert_eq!(serde_json::from_str::<Ratio>("2.5").unwrap(), Ratio(2.5));
    }
}
