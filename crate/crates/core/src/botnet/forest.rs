//! Bagged CART ensemble for binary classification.
//!
//! Trees split on Gini impurity with exact thresholds (midpoints between
//! consecutive distinct values), sample `round(sqrt(p))` candidate features per
//! node and vote by majority. Tree `t` draws its bootstrap and feature samples
//! from a generator seeded by `(seed, t)`, so the first `k` trees of a forest
//! are exactly the forest fitted with `n_trees = k`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum Node {
    Leaf { p: f64 },
    Split { feature: u16, threshold: f64, left: u32, right: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    /// Fraction of positive training samples in the leaf reached by `row`.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let mut i = 0usize;
        loop {
            match &self.nodes[i] {
                Node::Leaf { p } => return *p,
                Node::Split { feature, threshold, left, right } => {
                    i = if row[*feature as usize] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

    pub fn predict(&self, row: &[f64]) -> bool {
        self.predict_proba(row) > 0.5
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left as usize).max(go(nodes, *right as usize)),
            }
        }
        go(&self.nodes, 0)
    }

    fn fit(x: &[Vec<f64>], y: &[bool], mut idx: Vec<u32>, params: &ForestParams, rng: &mut ChaCha8Rng) -> Self {
        let p = x[0].len();
        let mtry = ((p as f64).sqrt().round() as usize).clamp(1, p);
        let mut nodes = vec![Node::Leaf { p: 0.0 }];
        // (node id, start, end, depth)
        let mut work = vec![(0usize, 0usize, idx.len(), 0usize)];
        let mut scratch: Vec<(f64, bool)> = Vec::with_capacity(idx.len());
        while let Some((id, lo, hi, depth)) = work.pop() {
            let part = &mut idx[lo..hi];
            let n = part.len();
            let pos = part.iter().filter(|&&i| y[i as usize]).count();
            let leaf = Node::Leaf { p: pos as f64 / n as f64 };
            let depth_ok = params.max_depth.is_none_or(|d| depth < d);
            if pos == 0 || pos == n || n < 2 * params.min_leaf.max(1) || !depth_ok {
                nodes[id] = leaf;
                continue;
            }
            let parent = gini_mass(pos, n);
            let mut best: Option<(f64, usize, f64)> = None;
            for f in sample(rng, p, mtry).into_iter() {
                scratch.clear();
                scratch.extend(part.iter().map(|&i| (x[i as usize][f], y[i as usize])));
                scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut left_pos = 0usize;
                for k in 0..n - 1 {
                    left_pos += scratch[k].1 as usize;
                    let nl = k + 1;
                    if nl < params.min_leaf || n - nl < params.min_leaf {
                        continue;
                    }
                    let (a, b) = (scratch[k].0, scratch[k + 1].0);
                    if a == b {
                        continue;
                    }
                    let imp = gini_mass(left_pos, nl) + gini_mass(pos - left_pos, n - nl);
                    if best.is_none_or(|(bi, _, _)| imp < bi) {
                        let mut t = a + (b - a) / 2.0;
                        if t >= b {
                            t = a;
                        }
                        best = Some((imp, f, t));
                    }
                }
            }
            match best {
                Some((imp, f, t)) if imp < parent - 1e-12 => {
                    let mut split = 0;
                    for k in 0..n {
                        if x[part[k] as usize][f] <= t {
                            part.swap(k, split);
                            split += 1;
                        }
                    }
                    let (l, r) = (nodes.len(), nodes.len() + 1);
                    nodes.push(Node::Leaf { p: 0.0 });
                    nodes.push(Node::Leaf { p: 0.0 });
                    nodes[id] = Node::Split {
                        feature: f as u16,
                        threshold: t,
                        left: l as u32,
                        right: r as u32,
                    };
                    work.push((r, lo + split, hi, depth + 1));
                    work.push((l, lo, lo + split, depth + 1));
                }
                _ => nodes[id] = leaf,
            }
        }
        DecisionTree { nodes }
    }
}

/// Gini impurity scaled by the sample count.
fn gini_mass(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    n as f64 * 2.0 * p * (1.0 - p)
}

fn tree_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomForest {
    pub params: ForestParams,
    pub n_features: usize,
    trees: Vec<DecisionTree>,
}

/// A forest together with each tree's in-bag mask, for out-of-bag scoring.
pub struct FittedForest {
    pub forest: RandomForest,
    in_bag: Vec<Vec<bool>>,
}

impl RandomForest {
    pub fn fit(x: &[Vec<f64>], y: &[bool], params: ForestParams, seed: u64) -> Result<FittedForest> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::Training("empty or mismatched training data".into()));
        }
        if y.iter().all(|&b| b) || y.iter().all(|&b| !b) {
            return Err(Error::Training("training set has a single class".into()));
        }
        let n = x.len();
        let built: Vec<(DecisionTree, Vec<bool>)> = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = tree_rng(seed, t);
                let mut in_bag = vec![false; n];
                let idx: Vec<u32> = (0..n)
                    .map(|_| {
                        let i = rng.random_range(0..n);
                        in_bag[i] = true;
                        i as u32
                    })
                    .collect();
                (DecisionTree::fit(x, y, idx, &params, &mut rng), in_bag)
            })
            .collect();
        let (trees, in_bag) = built.into_iter().unzip();
        Ok(FittedForest {
            forest: RandomForest { params, n_features: x[0].len(), trees },
            in_bag,
        })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    /// Share of trees voting positive.
    pub fn vote_share(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict(row)).count();
        votes as f64 / self.trees.len().max(1) as f64
    }

    pub fn predict(&self, row: &[f64]) -> bool {
        self.vote_share(row) > 0.5
    }

    pub fn accuracy(&self, x: &[Vec<f64>], y: &[bool]) -> f64 {
        if x.is_empty() {
            return 0.0;
        }
        let correct = x.iter().zip(y).filter(|(r, &l)| self.predict(r) == l).count();
        correct as f64 / x.len() as f64
    }
}

impl FittedForest {
    /// Out-of-bag accuracy of the first `k` trees over samples left out by at least one of them.
    pub fn oob_accuracy(&self, x: &[Vec<f64>], y: &[bool], k: usize) -> Option<f64> {
        let k = k.min(self.forest.trees.len());
        let mut votes = vec![(0u32, 0u32); x.len()];
        for (tree, bag) in self.forest.trees[..k].iter().zip(&self.in_bag) {
            for (i, row) in x.iter().enumerate() {
                if !bag[i] {
                    votes[i].0 += 1;
                    votes[i].1 += tree.predict(row) as u32;
                }
            }
        }
        let (mut seen, mut correct) = (0usize, 0usize);
        for (i, &(n, pos)) in votes.iter().enumerate() {
            if n > 0 {
                seen += 1;
                correct += ((2 * pos > n) == y[i]) as usize;
            }
        }
        (seen > 0).then(|| correct as f64 / seen as f64)
    }

    /// The forest made of the first `k` trees.
    pub fn truncated(&self, k: usize) -> RandomForest {
        let mut f = self.forest.clone();
        f.trees.truncate(k);
        f.params.n_trees = f.trees.len();
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn learns_threshold() {
        let x: Vec<Vec<f64>> = (0..200).map(|i| vec![i as f64, (i % 7) as f64]).collect();
        let y: Vec<bool> = (0..200).map(|i| i >= 120).collect();
        let p = ForestParams { n_trees: 10, max_depth: None, min_leaf: 1 };
        let f = RandomForest::fit(&x, &y, p, 1).unwrap();
        assert_eq!(f.forest.accuracy(&x, &y), 1.0);
        assert!(f.oob_accuracy(&x, &y, 10).unwrap() > 0.95);
    }

    #[test]
    fn prefix_equals_smaller_forest() {
        let x: Vec<Vec<f64>> = (0..100).map(|i| vec![(i * 37 % 101) as f64, i as f64]).collect();
        let y: Vec<bool> = (0..100).map(|i| (i * 37 % 101) % 3 == 0).collect();
        let big = RandomForest::fit(&x, &y, ForestParams { n_trees: 8, max_depth: Some(4), min_leaf: 1 }, 9).unwrap();
        let small = RandomForest::fit(&x, &y, ForestParams { n_trees: 3, max_depth: Some(4), min_leaf: 1 }, 9).unwrap();
        let a = serde_json::to_string(&big.truncated(3)).unwrap();
        let b = serde_json::to_string(&small.forest).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_class_rejected() {
        let x = vec![vec![1.0], vec![2.0]];
        let p = ForestParams { n_trees: 1, max_depth: None, min_leaf: 1 };
        assert!(RandomForest::fit(&x, &[true, true], p, 0).is_err());
    }

    #[test]
    fn depth_limit_respected() {
        let x: Vec<Vec<f64>> = (0..300).map(|i| vec![(i * 13 % 97) as f64, (i * 7 % 89) as f64]).collect();
        let y: Vec<bool> = (0..300).map(|i| i % 2 == 0).collect();
        let f = RandomForest::fit(&x, &y, ForestParams { n_trees: 4, max_depth: Some(3), min_leaf: 1 }, 3).unwrap();
        assert!(f.forest.trees().iter().all(|t| t.depth() <= 3));
    }
}
