//! Candidate-item scoring strategies and deterministic ranking.
//!
//! A strategy assigns every candidate item a score; higher means "ask the
//! user about this item sooner". Two strategies are personalized (they read
//! the factorization model), two depend only on rating statistics over the
//! training population.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::data::{ItemId, RatingStats, UserId, RATING_MAX};
use crate::mf::FactorModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    HighestPredicted,
    LowestPredicted,
    Entropy0,
    Popularity,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::HighestPredicted,
        StrategyKind::LowestPredicted,
        StrategyKind::Entropy0,
        StrategyKind::Popularity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::HighestPredicted => "highest-predicted",
            StrategyKind::LowestPredicted => "lowest-predicted",
            StrategyKind::Entropy0 => "entropy0",
            StrategyKind::Popularity => "popularity",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| StrategyError::UnknownStrategy(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("candidate set is empty")]
    EmptyCandidateSet,
    #[error("non-finite score for item {0}")]
    NonFiniteScore(ItemId),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredCandidate {
    pub item: ItemId,
    pub score: f64,
}

/// Score = predicted rating.
pub fn score_highest_predicted(
    model: &FactorModel,
    user: &UserId,
    candidates: &BTreeSet<ItemId>,
) -> Result<Vec<ScoredCandidate>, StrategyError> {
    if candidates.is_empty() {
        return Err(StrategyError::EmptyCandidateSet);
    }
    Ok(candidates
        .iter()
        .map(|item| ScoredCandidate { item: item.clone(), score: model.predict(user, item) })
        .collect())
}

/// Score = distance of the predicted rating from the top of the scale.
pub fn score_lowest_predicted(
    model: &FactorModel,
    user: &UserId,
    candidates: &BTreeSet<ItemId>,
) -> Result<Vec<ScoredCandidate>, StrategyError> {
    if candidates.is_empty() {
        return Err(StrategyError::EmptyCandidateSet);
    }
    Ok(candidates
        .iter()
        .map(|item| ScoredCandidate {
            item: item.clone(),
            score: f64::from(RATING_MAX) - model.predict(user, item),
        })
        .collect())
}

/// Entropy of the rating distribution with "unrated" folded in as a sixth
/// outcome of value 0: p_v = h(v)/T for v in 1..=5 and p_0 = (T-c)/T, where
/// T is the statistics population size and c the item's rating count.
pub fn score_entropy0(
    stats: &RatingStats,
    candidates: &BTreeSet<ItemId>,
) -> Result<Vec<ScoredCandidate>, StrategyError> {
    if candidates.is_empty() {
        return Err(StrategyError::EmptyCandidateSet);
    }
    let t = stats.population() as f64;
    Ok(candidates
        .iter()
        .map(|item| {
            let hist = stats.histogram(item);
            let count: u32 = hist.iter().sum();
            let mut entropy = 0.0;
            let p0 = (t - f64::from(count)) / t;
            if p0 > 0.0 {
                entropy -= p0 * p0.log2();
            }
            for &h in &hist {
                if h > 0 {
                    let p = f64::from(h) / t;
                    entropy -= p * p.log2();
                }
            }
            ScoredCandidate { item: item.clone(), score: entropy }
        })
        .collect())
}

/// Score = number of ratings the item has received.
pub fn score_popularity(stats: &RatingStats, candidates: &BTreeSet<ItemId>) -> Vec<ScoredCandidate> {
    candidates
        .iter()
        .map(|item| ScoredCandidate { item: item.clone(), score: f64::from(stats.count(item)) })
        .collect()
}

/// Order candidates by descending score, ties by ascending item id.
pub fn rank_candidates(scored: &[ScoredCandidate]) -> Result<Vec<ItemId>, StrategyError> {
    for c in scored {
        if !c.score.is_finite() {
            return Err(StrategyError::NonFiniteScore(c.item.clone()));
        }
    }
    let mut order: Vec<&ScoredCandidate> = scored.iter().collect();
    order.sort_by(|a, b| {
        b.score.partial_cmp(&a.score).expect("scores checked finite").then_with(|| a.item.cmp(&b.item))
    });
    Ok(order.into_iter().map(|c| c.item.clone()).collect())
}

/// Score with the given strategy and rank the result.
pub fn rank_for(
    strategy: StrategyKind,
    model: &FactorModel,
    user: &UserId,
    stats: &RatingStats,
    candidates: &BTreeSet<ItemId>,
) -> Result<Vec<ItemId>, StrategyError> {
    let scored = match strategy {
        StrategyKind::HighestPredicted => score_highest_predicted(model, user, candidates)?,
        StrategyKind::LowestPredicted => score_lowest_predicted(model, user, candidates)?,
        StrategyKind::Entropy0 => score_entropy0(stats, candidates)?,
        StrategyKind::Popularity => {
            if candidates.is_empty() {
                return Err(StrategyError::EmptyCandidateSet);
            }
            score_popularity(stats, candidates)
        }
    };
    rank_candidates(&scored)
}
