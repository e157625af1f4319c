//! Record builders shared by unit tests.

use crate::model::{
    name, parse_timestamp, ActionKind, ActionRecord, Payload, Quantity, TransferPayload,
};

pub fn transfer_action(
    seq: u64,
    contract: &str,
    from: &str,
    to: &str,
    qty: &str,
    kind: ActionKind,
) -> ActionRecord {
    ActionRecord {
        global_seq: seq,
        tx_id: format!("{seq:08x}"),
        timestamp: parse_timestamp("2018-06-09T01:00:00Z").unwrap(),
        executing_contract: name(contract),
        action_name: "transfer".into(),
        actor: name(from),
        notified: (kind == ActionKind::Notification).then(|| name(to)),
        kind,
        payload: Payload::Transfer(TransferPayload {
            from: name(from),
            to: name(to),
            quantity: qty.parse::<Quantity>().unwrap(),
            memo: String::new(),
        }),
    }
}

pub fn call_action(seq: u64, ts: &str, actor: &str, contract: &str, action: &str) -> ActionRecord {
    ActionRecord {
        global_seq: seq,
        tx_id: format!("{seq:08x}"),
        timestamp: parse_timestamp(ts).unwrap(),
        executing_contract: name(contract),
        action_name: action.into(),
        actor: name(actor),
        notified: None,
        kind: ActionKind::External,
        payload: Payload::Other(serde_json::Value::Null),
    }
}

/// Snapshot from `(name, creator, created_at)` rows.
pub fn snapshot(rows: &[(&str, Option<&str>, &str)]) -> crate::model::Snapshot {
    crate::model::Snapshot::from_records(rows.iter().map(|(n, c, at)| {
        crate::model::AccountRecord {
            name: name(n),
            creator: c.map(name),
            created_at: parse_timestamp(at).unwrap(),
            permissions: Default::default(),
            contract: false,
        }
    }))
    .unwrap()
}
