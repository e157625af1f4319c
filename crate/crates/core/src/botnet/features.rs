//! The eleven per-account features used by the classifier.

use serde::{Deserialize, Serialize};

use crate::graph::{ActivityIndex, Eacg};
use crate::model::ObservationWindow;

pub const FEATURE_COUNT: usize = 11;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "acg_depth",
    "transfer_in_std",
    "transfer_out_std",
    "volume_per_transfer_in",
    "volume_per_transfer_out",
    "transfer_target_num",
    "invoke_contract_num",
    "invocation_num",
    "invocation_std",
    "activate_time",
    "siblings_same_day",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AccountFeatures {
    pub acg_depth: f64,
    /// Standard deviation of daily received EOS since creation.
    pub transfer_in_std: f64,
    pub transfer_out_std: f64,
    /// Mean EOS per incoming transfer; 0 without transfers.
    pub volume_per_transfer_in: f64,
    pub volume_per_transfer_out: f64,
    pub transfer_target_num: f64,
    pub invoke_contract_num: f64,
    pub invocation_num: f64,
    /// Standard deviation of daily invocation counts since creation.
    pub invocation_std: f64,
    /// Fraction of days since creation with an initiated transfer or invocation.
    pub activate_time: f64,
    /// Other accounts created by the same creator on the same day.
    pub siblings_same_day: f64,
}

impl AccountFeatures {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.acg_depth,
            self.transfer_in_std,
            self.transfer_out_std,
            self.volume_per_transfer_in,
            self.volume_per_transfer_out,
            self.transfer_target_num,
            self.invoke_contract_num,
            self.invocation_num,
            self.invocation_std,
            self.activate_time,
            self.siblings_same_day,
        ]
    }

    pub fn from_array(a: [f64; FEATURE_COUNT]) -> Self {
        AccountFeatures {
            acg_depth: a[0],
            transfer_in_std: a[1],
            transfer_out_std: a[2],
            volume_per_transfer_in: a[3],
            volume_per_transfer_out: a[4],
            transfer_target_num: a[5],
            invoke_contract_num: a[6],
            invocation_num: a[7],
            invocation_std: a[8],
            activate_time: a[9],
            siblings_same_day: a[10],
        }
    }
}

/// Population std of a series of `n` days given only its non-zero entries.
fn sparse_std(nonzero: impl Iterator<Item = f64> + Clone, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let mean = nonzero.clone().sum::<f64>() / nf;
    let mut count = 0usize;
    let mut ss = 0.0;
    for x in nonzero {
        ss += (x - mean) * (x - mean);
        count += 1;
    }
    ss += (n - count) as f64 * mean * mean;
    (ss / nf).sqrt()
}

/// Features of one account. Accounts unknown to the creation graph get depth 0
/// and no siblings.
pub fn extract_features(
    account: &str,
    eacg: &Eacg,
    activity: &ActivityIndex,
    window: &ObservationWindow,
) -> AccountFeatures {
    let day_count = window.day_count() as i64;
    let node = eacg.index_of(account);
    let (depth, siblings, created) = match node {
        Some(u) => (
            eacg.depth_of(u) as f64,
            eacg.siblings_same_day(u) as f64,
            eacg.created_day(u),
        ),
        None => (0.0, 0.0, 0),
    };
    let first = created.clamp(0, day_count) as u32;
    let span = (day_count - first as i64).max(0) as usize;

    let mut f = AccountFeatures {
        acg_depth: depth,
        siblings_same_day: siblings,
        ..Default::default()
    };
    let Some(act) = activity.get(account) else {
        return f;
    };
    let days = || act.days.range(first..).filter(|(&d, _)| (d as i64) < day_count).map(|(_, a)| a);

    f.transfer_in_std = sparse_std(days().map(|a| a.in_amount.as_f64()), span);
    f.transfer_out_std = sparse_std(days().map(|a| a.out_amount.as_f64()), span);
    f.invocation_std = sparse_std(days().map(|a| a.invocations as f64), span);

    let (mut in_n, mut in_v, mut out_n, mut out_v) = (0u64, 0.0, 0u64, 0.0);
    for a in act.days.values() {
        in_n += u64::from(a.in_count);
        in_v += a.in_amount.as_f64();
        out_n += u64::from(a.out_count);
        out_v += a.out_amount.as_f64();
    }
    if in_n > 0 {
        f.volume_per_transfer_in = in_v / in_n as f64;
    }
    if out_n > 0 {
        f.volume_per_transfer_out = out_v / out_n as f64;
    }
    f.transfer_target_num = act.transfer_targets() as f64;
    f.invoke_contract_num = act.contracts.len() as f64;
    f.invocation_num = act.invocation_total() as f64;
    if span > 0 {
        let active = days().filter(|a| a.out_count > 0 || a.invocations > 0).count();
        f.activate_time = (active as f64 / span as f64).min(1.0);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_std_matches_dense() {
        let dense = [0.0, 3.0, 0.0, 5.0, 0.0];
        let mean = dense.iter().sum::<f64>() / 5.0;
        let want = (dense.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 5.0).sqrt();
        let got = sparse_std([3.0, 5.0].into_iter(), 5);
        assert!((got - want).abs() < 1e-12);
        assert_eq!(sparse_std(std::iter::empty(), 0), 0.0);
    }

    #[test]
    fn array_round_trip() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 0.5, 11.0];
        assert_eq!(AccountFeatures::from_array(a).to_array(), a);
    }
}
