//! Training with a held-out split and a hyper-parameter grid, plus model persistence.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::FEATURE_NAMES;
use super::forest::{ForestParams, RandomForest};
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_trees: Vec<usize>,
    pub max_depth: Vec<Option<usize>>,
    pub min_leaf: Vec<usize>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_trees: vec![50, 100, 200],
            max_depth: vec![Some(4), Some(8), Some(16), None],
            min_leaf: vec![1, 5, 20],
        }
    }
}

impl GridSpec {
    pub fn single(params: ForestParams) -> Self {
        GridSpec {
            n_trees: vec![params.n_trees],
            max_depth: vec![params.max_depth],
            min_leaf: vec![params.min_leaf],
        }
    }

    /// Configurations in search order: trees, then depth, then leaf size.
    pub fn configs(&self) -> Vec<ForestParams> {
        let mut out = Vec::new();
        for &n_trees in &self.n_trees {
            for &max_depth in &self.max_depth {
                for &min_leaf in &self.min_leaf {
                    out.push(ForestParams { n_trees, max_depth, min_leaf });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridScore {
    pub params: ForestParams,
    pub oob_accuracy: Option<f64>,
}

/// A persisted classifier with everything needed to reproduce it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestModel {
    pub format_version: u32,
    pub seed: u64,
    pub split_ratio: f64,
    pub grid: GridSpec,
    pub grid_scores: Vec<GridScore>,
    pub params: ForestParams,
    pub feature_names: Vec<String>,
    pub train_size: usize,
    pub test_size: usize,
    pub test_accuracy: f64,
    pub forest: RandomForest,
}

impl ForestModel {
    pub fn predict(&self, row: &[f64]) -> bool {
        self.forest.predict(row)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string(self)?;
        std::fs::write(path, s).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: ForestModel = serde_json::from_str(&s)?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Training(format!(
                "model format {} not supported (expected {MODEL_FORMAT_VERSION})",
                m.format_version
            )));
        }
        Ok(m)
    }
}

/// Seeded shuffle and split into `(train, test)` index lists.
pub fn split_indices(n: usize, ratio: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = ((n as f64) * ratio).round() as usize;
    let test = idx.split_off(cut.min(n));
    (idx, test)
}

fn gather<T: Clone>(v: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| v[i].clone()).collect()
}

/// Shuffle, split, pick the grid configuration with the best out-of-bag
/// accuracy on the training part (first wins on ties) and report accuracy on
/// the held-out part.
pub fn train_classifier(
    x: &[Vec<f64>],
    y: &[bool],
    split_ratio: f64,
    seed: u64,
    grid: &GridSpec,
) -> Result<ForestModel> {
    if !(split_ratio > 0.0 && split_ratio < 1.0) {
        return Err(Error::Training(format!("split ratio {split_ratio} outside (0,1)")));
    }
    let (train, test) = split_indices(x.len(), split_ratio, seed);
    let (xt, yt) = (gather(x, &train), gather(y, &train));
    let (xs, ys) = (gather(x, &test), gather(y, &test));

    // Trees depend only on (seed, index), so one fit per (depth, leaf) pair
    // serves every tree count as a prefix.
    let max_trees = grid.n_trees.iter().copied().max().unwrap_or(0);
    let mut scores = Vec::new();
    let mut best: Option<(f64, ForestParams, RandomForest)> = None;
    let mut fitted = std::collections::HashMap::new();
    for params in grid.configs() {
        let key = (params.max_depth, params.min_leaf);
        if !fitted.contains_key(&key) {
            let full = ForestParams { n_trees: max_trees, ..params };
            fitted.insert(key, RandomForest::fit(&xt, &yt, full, seed)?);
        }
        let ff = &fitted[&key];
        let oob = ff.oob_accuracy(&xt, &yt, params.n_trees);
        let score = oob.unwrap_or(0.0);
        if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
            best = Some((score, params, ff.truncated(params.n_trees)));
        }
        scores.push(GridScore { params, oob_accuracy: oob });
    }
    let (_, params, forest) = best.ok_or_else(|| Error::Training("empty grid".into()))?;
    let test_accuracy = forest.accuracy(&xs, &ys);
    Ok(ForestModel {
        format_version: MODEL_FORMAT_VERSION,
        seed,
        split_ratio,
        grid: grid.clone(),
        grid_scores: scores,
        params,
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        train_size: train.len(),
        test_size: test.len(),
        test_accuracy,
        forest,
    })
}

/// Held-out accuracy after shuffling the labels: the permutation-null baseline.
pub fn permutation_null_accuracy(
    x: &[Vec<f64>],
    y: &[bool],
    params: ForestParams,
    split_ratio: f64,
    seed: u64,
) -> Result<f64> {
    let mut shuffled = y.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_a11));
    let m = train_classifier(x, &shuffled, split_ratio, seed, &GridSpec::single(params))?;
    Ok(m.test_accuracy)
}
