//! Attack detector examples on hand-built traces.

use std::collections::HashMap;

use eosio_forensics::attacks::*;
use eosio_forensics::model::*;

fn transfer(seq: u64, ts: &str, contract: &str, from: &str, to: &str, qty: &str, kind: ActionKind, notified: Option<&str>) -> ActionRecord {
    ActionRecord {
        global_seq: seq,
        tx_id: format!("{seq:064x}"),
        timestamp: parse_timestamp(ts).unwrap(),
        executing_contract: name(contract),
        action_name: "transfer".into(),
        actor: name(from),
        notified: notified.map(name),
        kind,
        payload: Payload::Transfer(TransferPayload {
            from: name(from),
            to: name(to),
            quantity: qty.parse().unwrap(),
            memo: String::new(),
        }),
    }
}

fn registry() -> Registry {
    let mut r = Registry::default();
    r.dapp_accounts.insert(name("dice"), DappInfo { dapp: "Dice".into(), category: "gambling".into() });
    r
}

fn run(actions: &[ActionRecord]) -> AttackReport {
    let w = ObservationWindow::mainnet();
    let (transfers, _) = extract_transfers(actions, &w);
    let reg = registry();
    scan_attacks(
        &AttackInputs { actions, transfers: &transfers, registry: &reg, window: &w, rollback: None },
        &ScanConfig::default(),
    )
    .unwrap()
}

const EXT: ActionKind = ActionKind::External;

#[test]
fn fake_transfer_with_profit() {
    let acts = vec![
        transfer(1, "2018-07-01T01:00:00Z", "evil.token", "att", "dice", "1.0000 EOS", EXT, None),
        transfer(2, "2018-07-01T01:00:01Z", "eosio.token", "dice", "att", "50.0000 EOS", EXT, None),
    ];
    let r = run(&acts);
    assert_eq!(r.count(AttackKind::FakeTransfer), 1);
    let f = &r.findings[0];
    assert_eq!(f.profit, Amount::from_tokens(50));
    assert_eq!(f.evidence, vec![1, 2]);
    assert_eq!(f.signals.as_ref().unwrap().rollback_count, None);
}

#[test]
fn fake_transfer_without_profit_or_wrong_symbol() {
    let acts = vec![transfer(1, "2018-07-01T01:00:00Z", "evil.token", "att", "dice", "1.0000 EOS", EXT, None)];
    assert!(run(&acts).findings.is_empty());
    let acts = vec![
        transfer(1, "2018-07-01T01:00:00Z", "evil.token", "att", "dice", "1.0000 EOSS", EXT, None),
        transfer(2, "2018-07-01T01:00:01Z", "eosio.token", "dice", "att", "50.0000 EOS", EXT, None),
    ];
    assert_eq!(run(&acts).count(AttackKind::FakeTransfer), 0);
}

#[test]
fn fake_notice() {
    let n = ActionKind::Notification;
    let acts = vec![
        transfer(1, "2018-07-01T01:00:00Z", "eosio.token", "att", "helper", "1.0000 EOS", EXT, None),
        transfer(2, "2018-07-01T01:00:00Z", "eosio.token", "att", "helper", "1.0000 EOS", n, Some("helper")),
        transfer(3, "2018-07-01T01:00:00Z", "eosio.token", "att", "helper", "1.0000 EOS", n, Some("dice")),
        transfer(4, "2018-07-01T01:00:02Z", "eosio.token", "dice", "att", "20.0000 EOS", EXT, None),
    ];
    let r = run(&acts);
    assert_eq!(r.count(AttackKind::FakeNotice), 1);
    assert_eq!(r.findings[0].evidence, vec![3, 4]);
    assert!(!r.fake_notice_insufficient_data);

    // notice to the transfer's own receiver is ordinary
    let acts = vec![
        transfer(1, "2018-07-01T01:00:00Z", "eosio.token", "att", "dice", "1.0000 EOS", EXT, None),
        transfer(2, "2018-07-01T01:00:00Z", "eosio.token", "att", "dice", "1.0000 EOS", n, Some("dice")),
        transfer(3, "2018-07-01T01:00:02Z", "eosio.token", "dice", "att", "20.0000 EOS", EXT, None),
    ];
    assert_eq!(run(&acts).count(AttackKind::FakeNotice), 0);
}

#[test]
fn missing_notifications_reported() {
    let acts = vec![transfer(1, "2018-07-01T01:00:00Z", "eosio.token", "att", "dice", "1.0000 EOS", EXT, None)];
    assert!(run(&acts).fake_notice_insufficient_data);
}

#[test]
fn bundle_round_trip_and_tamper() {
    let acts = vec![
        transfer(1, "2018-07-01T01:00:00Z", "evil.token", "att", "dice", "1.0000 EOS", EXT, None),
        transfer(2, "2018-07-01T01:00:01Z", "eosio.token", "att", "dice", "3.0000 EOS", EXT, None),
        transfer(3, "2018-07-01T02:00:01Z", "eosio.token", "dice", "att", "50.0000 EOS", EXT, None),
        transfer(4, "2018-07-01T03:00:01Z", "eosio.token", "dice", "att", "5.5000 EOS", EXT, None),
    ];
    let r = run(&acts);
    let f = r.findings.iter().find(|f| f.kind == AttackKind::FakeTransfer).unwrap();
    assert_eq!(f.evidence.len(), 4);
    let by_seq: HashMap<u64, &ActionRecord> = acts.iter().map(|a| (a.global_seq, a)).collect();
    let dir = tempfile::tempdir().unwrap();
    let b = write_bundle(f, &by_seq, dir.path()).unwrap();
    verify_bundle(&b).unwrap();
    let lines = std::fs::read_to_string(b.join("actions.ndjson")).unwrap();
    assert_eq!(lines.lines().count(), 4);
    let flows = std::fs::read_to_string(b.join("flows.csv")).unwrap();
    assert!(flows.contains("-3.0000"));

    std::fs::write(b.join("actions.ndjson"), lines.replace("50.0000", "51.0000")).unwrap();
    assert!(verify_bundle(&b).is_err());

    let mut missing = by_seq.clone();
    missing.remove(&3);
    assert!(write_bundle(f, &missing, dir.path()).is_err());
}
