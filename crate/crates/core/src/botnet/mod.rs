//! Bot detection: community similarity, per-account classification and categorisation.

pub mod categorize;
pub mod classifier;
pub mod community;
pub mod features;
pub mod forest;
pub mod pipeline;
pub mod similarity;
pub mod vectors;

pub use categorize::{BotCategory, CategorizeConfig, Categorizer};
pub use classifier::{permutation_null_accuracy, split_indices, train_classifier, ForestModel, GridScore, GridSpec};
pub use community::{
    candidate_members, community_stats, detect_communities, merge_by_pubkey, shortlist_creators, CommunityScan,
    CommunityStats, MergedCommunities,
};
pub use features::{extract_features, AccountFeatures, FEATURE_COUNT, FEATURE_NAMES};
pub use forest::{DecisionTree, ForestParams, RandomForest};
pub use pipeline::{
    calibrate_from_registry, classify_accounts, detect_bots, features_for, labeled_features, read_verdicts,
    write_verdicts, BotConfig, BotContext, BotReport, BotVerdict, Calibration, VerdictSource,
};
pub use similarity::{calibrate_threshold, cosine_distance, group_distance, SimilarityThreshold};
pub use vectors::{to_dense, BehaviorVectors, SparseVec, VectorSpace};
