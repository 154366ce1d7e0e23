use thiserror::Error;

use crate::rootsystem::Weight;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Lie type {series}{rank}: {reason}")]
    InvalidLieType {
        series: char,
        rank: usize,
        reason: &'static str,
    },

    #[error("cannot parse Lie type {0:?} (expected e.g. A2, G2, E8)")]
    ParseLieType(String),

    #[error("dimension mismatch: expected rank {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(i64, i64),

    #[error("group law variant mismatch")]
    VariantMismatch,

    #[error("level must be positive, got {0}")]
    NonPositiveLevel(i64),

    #[error("weight {0} is not dominant")]
    NotDominant(Weight),

    #[error("weight {weight} is not a level-{k} weight")]
    NotLevelWeight { weight: Weight, k: i64 },

    #[error("fold did not terminate within {cap} reflections for {weight} at level {level}")]
    FoldGuard { weight: Weight, level: i64, cap: u64 },

    #[error("character is not alternating on the window: weight {weight} has {found}, expected {expected}")]
    NotAlternating {
        weight: Weight,
        found: i64,
        expected: i64,
    },

    #[error("interior weight {0} lies outside the window")]
    WindowTooSmall(Weight),

    #[error("term (eta={eta:?}, mu={mu}) does not fit in window {window}")]
    WindowOverflow {
        eta: Vec<i64>,
        mu: Weight,
        window: i64,
    },

    #[error("S-matrix oracle disagrees: deviation {deviation:e} at ({lambda}, {mu}) -> {nu}")]
    OracleDisagreement {
        lambda: Weight,
        mu: Weight,
        nu: Weight,
        deviation: f64,
    },

    #[error("level {level} is below h_dual + 1 = {min}")]
    LevelTooSmall { level: i64, min: i64 },

    #[error("{lie_type} has a Weyl group of order {order}, above the enumeration limit {limit}")]
    WeylGroupTooLarge { lie_type: String, order: usize, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
