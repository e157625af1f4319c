use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal, Poisson};

use crate::botnet::{AccountFeatures, FEATURE_COUNT};

/// Per-class feature means the generated populations are centred on.
pub const BOT_MEANS: [f64; FEATURE_COUNT] = [4.3, 40.8, 57.3, 2.2, 6.2, 5.9, 16.1, 518.5, 6.2, 0.746, 1724.1];
pub const NORMAL_MEANS: [f64; FEATURE_COUNT] =
    [1.8, 954.0, 1267.3, 104.0, 553.1, 12.6, 3.2, 2312.7, 40.3, 0.134, 117_024.4];

/// Spread of the multiplicative noise on the positive features.
const SIGMA: f64 = 0.7;

fn sample(means: &[f64; FEATURE_COUNT], rng: &mut ChaCha8Rng) -> AccountFeatures {
    let noise = LogNormal::new(-SIGMA * SIGMA / 2.0, SIGMA).expect("valid lognormal");
    let mut a = [0.0; FEATURE_COUNT];
    for (i, m) in means.iter().enumerate() {
        a[i] = match i {
            0 => 1.0 + Poisson::new(m - 1.0).expect("positive rate").sample(rng),
            5..=7 => (m * noise.sample(rng)).round(),
            9 => (m + Normal::new(0.0, 0.1).expect("valid normal").sample(rng)).clamp(0.0, 1.0),
            _ => m * noise.sample(rng),
        };
    }
    AccountFeatures::from_array(a)
}

/// Labeled feature rows: `bots` bot rows followed by `normals` normal rows.
pub fn labeled_feature_set(bots: usize, normals: usize, seed: u64) -> (Vec<AccountFeatures>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(bots + normals);
    let mut y = Vec::with_capacity(bots + normals);
    for _ in 0..bots {
        x.push(sample(&BOT_MEANS, &mut rng));
        y.push(true);
    }
    for _ in 0..normals {
        x.push(sample(&NORMAL_MEANS, &mut rng));
        y.push(false);
    }
    (x, y)
}
