//! Optimal controller strategies: hitting, return and cover times,
//! stationary mass, weighted-walk emulation and the associated bounds.

mod cover;
mod hitting;
pub(crate) mod mdp;
mod simple;
mod weights;

pub use cover::{
    best_step, cost_decision, cover_policy_from, next_step, optimal_cover_policy, CoverLayer,
    CoverPolicy, COVER_CAP,
};
pub use hitting::{
    azarconj_check, biased_stationary, bound_report, max_stationary, optimal_hitting_policy,
    AzarCheck, BoundReport, HittingPolicy, PairBound,
};
pub use mdp::Sense;
pub use simple::{dense_no_boost_check, simple_walk_sandwich, DenseCheck, Sandwich, SimpleWalkBounds};
pub use weights::{
    boost_stationary_scheme, emulate_weights, emulation_gap, emulation_threshold,
    weighted_walk_kernel, SchemeBoost, WeightScheme,
};
