use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::name::AccountName;
use super::quantity::Quantity;
use super::window::{ts_format, Timestamp};
use crate::error::Error;

pub const TOKEN_CONTRACT: &str = "eosio.token";
pub const SYSTEM_ACCOUNT: &str = "eosio";
pub const CODE_PERMISSION: &str = "eosio.code";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    External,
    Inline,
    Deferred,
    Notification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferPayload {
    pub from: AccountName,
    pub to: AccountName,
    pub quantity: Quantity,
    #[serde(default)]
    pub memo: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyWeight {
    pub key: String,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountWeight {
    pub actor: AccountName,
    pub permission: String,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateAuthPayload {
    pub account: AccountName,
    pub permission: String,
    pub parent: String,
    pub threshold: u32,
    #[serde(default)]
    pub key_weights: Vec<KeyWeight>,
    #[serde(default)]
    pub account_weights: Vec<AccountWeight>,
}

impl UpdateAuthPayload {
    pub fn validate(&self) -> Result<(), Error> {
        if self.threshold == 0 {
            return Err(Error::InvalidRecord(format!(
                "updateauth {}@{} has zero threshold",
                self.account, self.permission
            )));
        }
        let zero_key = self.key_weights.iter().any(|k| k.weight == 0);
        let zero_acct = self.account_weights.iter().any(|a| a.weight == 0);
        if zero_key || zero_acct {
            return Err(Error::InvalidRecord(format!(
                "updateauth {}@{} has a zero weight",
                self.account, self.permission
            )));
        }
        Ok(())
    }
}

/// Action payload, decoded for the actions the analyses look at.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Transfer(TransferPayload),
    UpdateAuth(UpdateAuthPayload),
    Other(Value),
}

impl Payload {
    fn decode(contract: &str, action: &str, raw: Value) -> Result<Payload, Error> {
        let has = |k: &str| raw.get(k).is_some();
        match action {
            "transfer" if has("quantity") => serde_json::from_value(raw)
                .map(Payload::Transfer)
                .map_err(|e| Error::InvalidRecord(format!("transfer payload: {e}"))),
            "updateauth" if contract == SYSTEM_ACCOUNT => {
                let p: UpdateAuthPayload = serde_json::from_value(raw)
                    .map_err(|e| Error::InvalidRecord(format!("updateauth payload: {e}")))?;
                p.validate()?;
                Ok(Payload::UpdateAuth(p))
            }
            _ => Ok(Payload::Other(raw)),
        }
    }
}

/// One executed action as it appears in a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAction")]
pub struct ActionRecord {
    pub global_seq: u64,
    pub tx_id: String,
    #[serde(with = "ts_format")]
    pub timestamp: Timestamp,
    pub executing_contract: AccountName,
    pub action_name: String,
    pub actor: AccountName,
    pub notified: Option<AccountName>,
    pub kind: ActionKind,
    pub payload: Payload,
}

#[derive(Deserialize)]
struct RawAction {
    global_seq: u64,
    tx_id: String,
    #[serde(with = "ts_format")]
    timestamp: Timestamp,
    executing_contract: AccountName,
    action_name: String,
    actor: AccountName,
    #[serde(default)]
    notified: Option<AccountName>,
    kind: ActionKind,
    #[serde(default)]
    payload: Value,
}

impl TryFrom<RawAction> for ActionRecord {
    type Error = Error;

    fn try_from(r: RawAction) -> Result<Self, Error> {
        if r.kind == ActionKind::Notification && r.notified.is_none() {
            return Err(Error::InvalidRecord(format!(
                "notification {} has no notified account",
                r.global_seq
            )));
        }
        if r.action_name.is_empty() {
            return Err(Error::InvalidRecord(format!(
                "action {} has an empty name",
                r.global_seq
            )));
        }
        let payload = Payload::decode(r.executing_contract.as_str(), &r.action_name, r.payload)?;
        Ok(ActionRecord {
            global_seq: r.global_seq,
            tx_id: r.tx_id,
            timestamp: r.timestamp,
            executing_contract: r.executing_contract,
            action_name: r.action_name,
            actor: r.actor,
            notified: r.notified,
            kind: r.kind,
            payload,
        })
    }
}

impl ActionRecord {
    pub fn transfer(&self) -> Option<&TransferPayload> {
        match &self.payload {
            Payload::Transfer(t) => Some(t),
            _ => None,
        }
    }

    pub fn update_auth(&self) -> Option<&UpdateAuthPayload> {
        match &self.payload {
            Payload::UpdateAuth(u) => Some(u),
            _ => None,
        }
    }

    pub fn is_notification(&self) -> bool {
        self.kind == ActionKind::Notification
    }

    /// True for a transfer of the native token executed by the official token contract.
    pub fn is_genuine_eos_transfer(&self) -> bool {
        self.action_name == "transfer"
            && self.executing_contract == TOKEN_CONTRACT
            && self.transfer().is_some_and(|t| t.quantity.is_eos())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("action records always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{"global_seq":5,"tx_id":"ab01","timestamp":"2018-06-09T00:00:01Z","executing_contract":"eosio.token","action_name":"transfer","actor":"alice","notified":null,"kind":"external","payload":{"from":"alice","to":"bob","quantity":"1.0000 EOS","memo":"hi"}}"#;

    #[test]
    fn decodes_transfer_and_round_trips() {
        let rec: ActionRecord = serde_json::from_str(LINE).unwrap();
        let t = rec.transfer().unwrap();
        assert_eq!(t.from, "alice");
        assert_eq!(t.quantity.to_string(), "1.0000 EOS");
        assert!(rec.is_genuine_eos_transfer());
        assert_eq!(rec.to_json_line(), LINE);
    }

    #[test]
    fn notification_requires_notified() {
        let line = LINE.replace("\"external\"", "\"notification\"");
        assert!(serde_json::from_str::<ActionRecord>(&line).is_err());
        let line = line.replace("\"notified\":null", "\"notified\":\"bob\"");
        assert!(serde_json::from_str::<ActionRecord>(&line).is_ok());
    }

    #[test]
    fn bad_names_and_quantities_are_rejected() {
        assert!(serde_json::from_str::<ActionRecord>(&LINE.replace("alice", "Alice")).is_err());
        assert!(serde_json::from_str::<ActionRecord>(&LINE.replace("1.0000 EOS", "1 eos")).is_err());
    }

    #[test]
    fn updateauth_zero_threshold_rejected() {
        let line = r#"{"global_seq":1,"tx_id":"00","timestamp":"2018-06-09T00:00:01Z","executing_contract":"eosio","action_name":"updateauth","actor":"alice","kind":"external","payload":{"account":"alice","permission":"active","parent":"owner","threshold":0,"key_weights":[],"account_weights":[]}}"#;
        assert!(serde_json::from_str::<ActionRecord>(line).is_err());
        let ok = line.replace("\"threshold\":0", "\"threshold\":1");
        let rec: ActionRecord = serde_json::from_str(&ok).unwrap();
        assert!(rec.update_auth().is_some());
    }

    #[test]
    fn other_payloads_pass_through() {
        let line = r#"{"global_seq":1,"tx_id":"00","timestamp":"2018-06-09T00:00:01Z","executing_contract":"dicegame1111","action_name":"play","actor":"alice","kind":"external","payload":{"roll":42}}"#;
        let rec: ActionRecord = serde_json::from_str(line).unwrap();
        assert!(matches!(rec.payload, Payload::Other(_)));
    }
}
