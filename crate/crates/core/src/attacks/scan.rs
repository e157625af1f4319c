use serde::Serialize;

use super::config::ScanConfig;
use super::finding::{sort_findings, AttackFinding, AttackKind};
use super::profit::{liveness_filter, profit_scan, SuspiciousWindow, TransferIndex};
use super::signals::{auxiliary_signals, DeferredIndex, RollbackLog};
use super::unchecked::{detect_fake_notice, detect_fake_transfer};
use crate::error::Result;
use crate::model::{ActionRecord, Diagnostic, ObservationWindow, Registry, Transfer};

pub struct AttackInputs<'a> {
    pub actions: &'a [ActionRecord],
    pub transfers: &'a [Transfer],
    pub registry: &'a Registry,
    pub window: &'a ObservationWindow,
    pub rollback: Option<&'a RollbackLog>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AttackReport {
    /// Sorted by (attacker, window start, kind, victim).
    pub findings: Vec<AttackFinding>,
    pub suspicious: Vec<SuspiciousWindow>,
    pub fake_notice_insufficient_data: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl AttackReport {
    pub fn count(&self, kind: AttackKind) -> usize {
        self.findings.iter().filter(|f| f.kind == kind).count()
    }
}

/// Run every detector and attach auxiliary signals to each finding.
pub fn scan_attacks(inputs: &AttackInputs<'_>, cfg: &ScanConfig) -> Result<AttackReport> {
    cfg.validate()?;
    let index = TransferIndex::new(inputs.transfers);
    let mut findings = detect_fake_transfer(inputs.actions, &index, inputs.registry, inputs.window);
    let notice = detect_fake_notice(inputs.actions, &index, inputs.registry, inputs.window);
    findings.extend(notice.findings);
    let suspicious = profit_scan(&index, cfg, inputs.window, inputs.registry);
    let (predictable, diagnostics) = liveness_filter(&suspicious, &index, cfg, inputs.window);
    findings.extend(predictable);

    let deferred = DeferredIndex::build(inputs.actions);
    for f in &mut findings {
        f.signals = Some(auxiliary_signals(f.attacker.as_str(), inputs.rollback, &deferred));
    }
    sort_findings(&mut findings);
    Ok(AttackReport {
        findings,
        suspicious,
        fake_notice_insufficient_data: notice.insufficient_data,
        diagnostics,
    })
}
