//! Per-account behaviour vectors.
//!
//! The time vector has `2 * day_count` entries: outgoing transfer counts per day
//! followed by contract invocation counts per day. The target vector has one
//! entry per invoked contract, indexed by the sorted contract list of the run.
//! Both are stored sparsely as `(index, value)` pairs in index order.

use std::collections::HashMap;

use serde::Serialize;

use crate::graph::{ActivityIndex, Ecig};
use crate::model::{AccountName, ObservationWindow};

pub type SparseVec = Vec<(u32, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BehaviorVectors {
    pub time: SparseVec,
    pub target: SparseVec,
}

impl BehaviorVectors {
    pub fn time_sum(&self) -> f64 {
        self.time.iter().map(|e| e.1).sum()
    }

    pub fn target_sum(&self) -> f64 {
        self.target.iter().map(|e| e.1).sum()
    }
}

/// Shared indexing for one run: the day count and the canonical contract order.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    pub day_count: u32,
    pub contracts: Vec<AccountName>,
    index: HashMap<AccountName, u32>,
}

impl VectorSpace {
    pub fn new(ecig: &Ecig, window: &ObservationWindow) -> Self {
        let contracts: Vec<AccountName> = ecig.contracts().into_iter().cloned().collect();
        let index = contracts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        VectorSpace {
            day_count: window.day_count(),
            contracts,
            index,
        }
    }

    pub fn time_dim(&self) -> usize {
        2 * self.day_count as usize
    }

    pub fn target_dim(&self) -> usize {
        self.contracts.len()
    }

    pub fn contract_index(&self, c: &str) -> Option<u32> {
        self.index.get(c).copied()
    }

    /// Vectors for `account`, or `None` when it is silent (never sends nor invokes).
    pub fn vectors(&self, account: &str, activity: &ActivityIndex) -> Option<BehaviorVectors> {
        let act = activity.get(account)?;
        let d = self.day_count;
        let mut outs = Vec::new();
        let mut calls = Vec::new();
        for (&day, a) in &act.days {
            if day >= d {
                continue;
            }
            if a.out_count > 0 {
                outs.push((day, a.out_count as f64));
            }
            if a.invocations > 0 {
                calls.push((d + day, a.invocations as f64));
            }
        }
        outs.extend(calls);
        let mut target: SparseVec = act
            .contracts
            .iter()
            .filter_map(|(c, &n)| self.contract_index(c.as_str()).map(|i| (i, n as f64)))
            .collect();
        target.sort_by_key(|e| e.0);
        if outs.is_empty() && target.is_empty() {
            return None;
        }
        Some(BehaviorVectors { time: outs, target })
    }
}

pub fn to_dense(v: &SparseVec, dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for &(i, x) in v {
        out[i as usize] = x;
    }
    out
}
