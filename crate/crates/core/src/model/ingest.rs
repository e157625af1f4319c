use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::Serialize;

use super::action::{ActionRecord, TOKEN_CONTRACT};
use super::name::AccountName;
use super::quantity::Amount;
use super::window::{ObservationWindow, Timestamp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

/// Parsed action stream in `global_seq` order.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub actions: Vec<ActionRecord>,
    pub diagnostics: Vec<Diagnostic>,
    pub outside_window: usize,
}

pub fn parse_action_trace(path: &Path, window: &ObservationWindow) -> Result<Trace> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_action_trace(file, window).map_err(|e| match e {
        Error::TooManyMalformed {
            malformed,
            total,
            first,
            ..
        } => Error::TooManyMalformed {
            path: path.to_path_buf(),
            malformed,
            total,
            first,
        },
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_action_trace(reader: impl Read, window: &ObservationWindow) -> Result<Trace> {
    let mut trace = Trace::default();
    let mut total = 0usize;
    let mut last_seq: Option<u64> = None;
    let mut sorted = true;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<trace>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        let rec: ActionRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                trace.diagnostics.push(Diagnostic {
                    line: idx + 1,
                    message: e.to_string(),
                });
                continue;
            }
        };
        if last_seq.is_some_and(|s| rec.global_seq <= s) {
            sorted = false;
        }
        last_seq = Some(last_seq.map_or(rec.global_seq, |s| s.max(rec.global_seq)));
        if !window.contains(&rec.timestamp) {
            trace.outside_window += 1;
            continue;
        }
        trace.actions.push(rec);
    }
    if total > 0 && trace.diagnostics.len() * 100 > total {
        return Err(Error::TooManyMalformed {
            path: "<trace>".into(),
            malformed: trace.diagnostics.len(),
            total,
            first: trace.diagnostics[0].message.clone(),
        });
    }
    if !sorted {
        trace.actions.sort_by_key(|a| a.global_seq);
        let before = trace.actions.len();
        trace.actions.dedup_by_key(|a| a.global_seq);
        if trace.actions.len() != before {
            trace.diagnostics.push(Diagnostic {
                line: 0,
                message: format!("{} duplicate global_seq records dropped", before - trace.actions.len()),
            });
        }
    }
    Ok(trace)
}

pub fn write_action_trace<'a>(
    w: &mut impl Write,
    actions: impl IntoIterator<Item = &'a ActionRecord>,
) -> std::io::Result<()> {
    for a in actions {
        serde_json::to_writer(&mut *w, a)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// One genuine EOS money transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub seq: u64,
    pub timestamp: Timestamp,
    pub day: u32,
    pub from: AccountName,
    pub to: AccountName,
    pub amount: Amount,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TransferStats {
    pub accepted: usize,
    pub notifications: usize,
    pub unofficial_contract: usize,
    pub non_eos_symbol: usize,
    pub self_transfers: usize,
}

/// Keep originating `eosio.token` EOS transfers between distinct accounts.
pub fn extract_transfers(
    actions: &[ActionRecord],
    window: &ObservationWindow,
) -> (Vec<Transfer>, TransferStats) {
    let mut stats = TransferStats::default();
    let mut out = Vec::new();
    for a in actions {
        let Some(t) = a.transfer() else { continue };
        if a.action_name != "transfer" {
            continue;
        }
        if a.is_notification() {
            stats.notifications += 1;
            continue;
        }
        if a.executing_contract != TOKEN_CONTRACT {
            stats.unofficial_contract += 1;
            continue;
        }
        if !t.quantity.is_eos() {
            stats.non_eos_symbol += 1;
            continue;
        }
        if t.from == t.to {
            stats.self_transfers += 1;
            continue;
        }
        let Some(day) = window.day_index(&a.timestamp) else {
            continue;
        };
        stats.accepted += 1;
        out.push(Transfer {
            seq: a.global_seq,
            timestamp: a.timestamp,
            day,
            from: t.from.clone(),
            to: t.to.clone(),
            amount: t.quantity.amount,
        });
    }
    (out, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::action::ActionKind;
    use crate::model::window::parse_timestamp;
    use crate::testutil::transfer_action;

    #[test]
    fn empty_trace() {
        let t = read_action_trace(&b""[..], &ObservationWindow::mainnet()).unwrap();
        assert!(t.actions.is_empty());
        assert!(t.diagnostics.is_empty());
    }

    #[test]
    fn three_lines_in_order() {
        let mut buf = Vec::new();
        let recs: Vec<_> = (5..=7)
            .map(|s| transfer_action(s, "eosio.token", "alice", "bob", "1.0000 EOS", ActionKind::External))
            .collect();
        write_action_trace(&mut buf, &recs).unwrap();
        let t = read_action_trace(&buf[..], &ObservationWindow::mainnet()).unwrap();
        assert_eq!(t.actions.iter().map(|a| a.global_seq).collect::<Vec<_>>(), vec![5, 6, 7]);
        assert_eq!(t.actions, recs);
    }

    #[test]
    fn malformed_lines_are_diagnostics_until_one_percent() {
        let good = transfer_action(1, "eosio.token", "alice", "bob", "1.0000 EOS", ActionKind::External);
        let mut text = String::new();
        for s in 0..200u64 {
            let mut g = good.clone();
            g.global_seq = s;
            text.push_str(&g.to_json_line());
            text.push('\n');
        }
        text.push_str("{not json}\n");
        let t = read_action_trace(text.as_bytes(), &ObservationWindow::mainnet()).unwrap();
        assert_eq!(t.actions.len(), 200);
        assert_eq!(t.diagnostics.len(), 1);
        assert_eq!(t.diagnostics[0].line, 201);

        text.push_str("{not json}\n{still not}\n");
        let err = read_action_trace(text.as_bytes(), &ObservationWindow::mainnet()).unwrap_err();
        assert!(matches!(err, Error::TooManyMalformed { malformed: 3, .. }));
    }

    #[test]
    fn out_of_window_records_are_counted() {
        let mut a = transfer_action(1, "eosio.token", "alice", "bob", "1.0000 EOS", ActionKind::External);
        a.timestamp = parse_timestamp("2017-01-01T00:00:00Z").unwrap();
        let buf = format!("{}\n", a.to_json_line());
        let t = read_action_trace(buf.as_bytes(), &ObservationWindow::mainnet()).unwrap();
        assert!(t.actions.is_empty());
        assert_eq!(t.outside_window, 1);
    }

    #[test]
    fn unordered_input_is_sorted() {
        let recs: Vec<_> = [3u64, 1, 2]
            .iter()
            .map(|&s| transfer_action(s, "eosio.token", "alice", "bob", "1.0000 EOS", ActionKind::External))
            .collect();
        let mut buf = Vec::new();
        write_action_trace(&mut buf, &recs).unwrap();
        let t = read_action_trace(&buf[..], &ObservationWindow::mainnet()).unwrap();
        assert_eq!(t.actions.iter().map(|a| a.global_seq).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn transfer_filters() {
        let w = ObservationWindow::mainnet();
        let actions = vec![
            transfer_action(1, "eosio.token", "alice", "bob", "1.0000 EOS", ActionKind::External),
            transfer_action(2, "eosio.token", "alice", "bob", "1.0000 EOS", ActionKind::Notification),
            transfer_action(3, "evil.token", "alice", "bob", "1.0000 EOS", ActionKind::External),
            transfer_action(4, "eosio.token", "alice", "bob", "1.0000 EOSS", ActionKind::External),
            transfer_action(5, "eosio.token", "alice", "alice", "1.0000 EOS", ActionKind::External),
            transfer_action(6, "eosio.token", "dapp", "bob", "2.5000 EOS", ActionKind::Inline),
        ];
        let (t, stats) = extract_transfers(&actions, &w);
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].amount, Amount(10_000));
        assert_eq!(t[1].from, "dapp");
        assert_eq!(stats.notifications, 1);
        assert_eq!(stats.unofficial_contract, 1);
        assert_eq!(stats.non_eos_symbol, 1);
        assert_eq!(stats.self_transfers, 1);
    }
}
