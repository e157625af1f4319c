use serde::{Deserialize, Serialize};

use super::vectors::SparseVec;
use crate::error::{Error, Result};

fn norm(v: &SparseVec) -> f64 {
    v.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt()
}

/// `1 - cos(u, v)`; `None` when either vector is zero.
pub fn cosine_distance(u: &SparseVec, v: &SparseVec) -> Option<f64> {
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    let (mut i, mut j, mut dot) = (0, 0, 0.0);
    while i < u.len() && j < v.len() {
        match u[i].0.cmp(&v[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += u[i].1 * v[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    Some((1.0 - dot / (nu * nv)).clamp(0.0, 1.0))
}

/// Mean cosine distance of each vector to the mean vector `m = (1/N) Σ v_j`.
/// Zero vectors are skipped; `None` when nothing remains.
pub fn group_distance(vectors: &[&SparseVec], dim: usize) -> Option<f64> {
    let live: Vec<&SparseVec> = vectors.iter().copied().filter(|v| norm(v) > 0.0).collect();
    if live.is_empty() {
        return None;
    }
    let n = live.len() as f64;
    let mut mean = vec![0.0f64; dim];
    for v in &live {
        for &(i, x) in v.iter() {
            mean[i as usize] += x;
        }
    }
    for x in &mut mean {
        *x /= n;
    }
    let mean_norm = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
    let total: f64 = live
        .iter()
        .map(|v| {
            let dot: f64 = v.iter().map(|&(i, x)| x * mean[i as usize]).sum();
            (1.0 - dot / (norm(v) * mean_norm)).clamp(0.0, 1.0)
        })
        .sum();
    Some(total / n)
}

/// Acceptance box for community distances: `mean ± 3 sd` per axis, clipped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityThreshold {
    pub mean_t: f64,
    pub sd_t: f64,
    pub mean_s: f64,
    pub sd_s: f64,
}

/// Bounds are rounded to ten decimals so that e.g. `0.09 + 3 * 0.08` is exactly `0.33`.
fn round10(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

impl SimilarityThreshold {
    pub const SIGMAS: f64 = 3.0;

    pub fn time_box(&self) -> (f64, f64) {
        Self::bounds(self.mean_t, self.sd_t)
    }

    pub fn target_box(&self) -> (f64, f64) {
        Self::bounds(self.mean_s, self.sd_s)
    }

    fn bounds(mean: f64, sd: f64) -> (f64, f64) {
        let lo = round10(mean - Self::SIGMAS * sd).clamp(0.0, 1.0);
        let hi = round10(mean + Self::SIGMAS * sd).clamp(0.0, 1.0);
        (lo, hi)
    }

    pub fn contains(&self, dist_t: f64, dist_s: f64) -> bool {
        let (tl, th) = self.time_box();
        let (sl, sh) = self.target_box();
        (tl..=th).contains(&dist_t) && (sl..=sh).contains(&dist_s)
    }
}

fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Population mean and standard deviation of `(dist_t, dist_s)` over labeled bot communities.
pub fn calibrate_threshold(bot_dists: &[(f64, f64)]) -> Result<SimilarityThreshold> {
    if bot_dists.len() < 2 {
        return Err(Error::Calibration(bot_dists.len()));
    }
    let (mean_t, sd_t) = mean_sd(bot_dists.iter().map(|d| d.0));
    let (mean_s, sd_s) = mean_sd(bot_dists.iter().map(|d| d.1));
    Ok(SimilarityThreshold { mean_t, sd_t, mean_s, sd_s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors_have_zero_distance() {
        let v: SparseVec = vec![(0, 2.0), (3, 1.0)];
        assert!(group_distance(&[&v, &v, &v], 4).unwrap() < 1e-12);
    }

    #[test]
    fn orthogonal_pair() {
        let a: SparseVec = vec![(0, 1.0)];
        let b: SparseVec = vec![(1, 1.0)];
        let d = group_distance(&[&a, &b], 2).unwrap();
        assert!((d - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn zero_vectors_skipped() {
        let z: SparseVec = vec![];
        assert_eq!(group_distance(&[&z], 3), None);
        let a: SparseVec = vec![(0, 1.0)];
        assert!(group_distance(&[&z, &a], 3).unwrap() < 1e-12);
    }

    #[test]
    fn reference_calibration_box() {
        let t = SimilarityThreshold { mean_t: 0.09, sd_t: 0.08, mean_s: 0.03, sd_s: 0.05 };
        assert_eq!(t.time_box(), (0.0, 0.33));
        assert_eq!(t.target_box(), (0.0, 0.18));
    }

    #[test]
    fn degenerate_box() {
        let t = calibrate_threshold(&[(0.05, 0.05), (0.05, 0.05)]).unwrap();
        assert_eq!(t.time_box(), (0.05, 0.05));
        assert!(t.contains(0.05, 0.05));
        assert!(!t.contains(0.06, 0.05));
    }

    #[test]
    fn too_few_communities() {
        assert!(matches!(calibrate_threshold(&[(0.1, 0.1)]), Err(Error::Calibration(1))));
    }
}
