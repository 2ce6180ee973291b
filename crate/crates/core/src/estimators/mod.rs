//! Inner-product estimators: the concomitant (CEOs) estimator, SimHash and
//! SimpleLSH baselines, and the exact brute-force scan used as ground truth.

mod brute;
mod ceos;
mod simhash;
mod simplelsh;

pub use brute::brute_force_topk;
pub(crate) use ceos::raw_from_lookup;
pub use ceos::{
    ceos_estimate, estimate_from_signature, normalization, sceos_est_scores, sceos_est_topb,
    CeosEstimate,
};
pub use simhash::{
    simhash_encode, simhash_estimate, simhash_linearized_estimate, BinaryCode, SimHasher,
};
pub use simplelsh::{simplelsh_transform, simplelsh_transform_query};
