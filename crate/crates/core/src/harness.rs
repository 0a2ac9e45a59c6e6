//! Cross-validated simulation of rating elicitation for new users.
//!
//! Target-domain users are dealt into k folds. Each fold in turn plays the
//! "new users": their target ratings are split into a hidden test set of 5,
//! a candidate set the strategy may ask about, and a training profile that
//! starts empty. Each iteration trains a model on everything available,
//! measures MAE and spread, then moves every user's top-ranked candidate
//! into their profile.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::data::{DataError, Dataset, Domain, ItemId, Rating, RatingStats, UserId};
use crate::mf::{train, FactorModel, Hyperparams, MfError};
use crate::seed::child_seed;
use crate::strategies::{rank_for, StrategyError, StrategyKind};

/// Hidden ratings per test user.
pub const TEST_SET_SIZE: usize = 5;
/// Minimum candidate ratings per test user at construction.
pub const MIN_CANDIDATE_SIZE: usize = 15;
/// Minimum profile size a user needs to be splittable.
pub const MIN_PROFILE_SIZE: usize = TEST_SET_SIZE + MIN_CANDIDATE_SIZE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    SingleDomain,
    CrossDomain,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::SingleDomain => "single",
            Scenario::CrossDomain => "cross",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scenario {0:?}, expected \"single\" or \"cross\"")]
pub struct UnknownScenario(pub String);

impl FromStr for Scenario {
    type Err = UnknownScenario;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Scenario::SingleDomain),
            "cross" => Ok(Scenario::CrossDomain),
            other => Err(UnknownScenario(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("cannot split {user_count} users into {fold_count} folds")]
    TooFewUsers { user_count: usize, fold_count: usize },
    #[error("user {0} has fewer than {MIN_PROFILE_SIZE} ratings and cannot be split")]
    InsufficientRatings(UserId),
    #[error("no split registered for test user {0}")]
    MissingSplit(UserId),
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("no recommendations to measure spread over")]
    NoRecommendations,
    #[error("baseline metric is not positive, improvement undefined")]
    ZeroBaseline,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] MfError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Seeded assignment of every user to one of `fold_count` folds, sizes
/// differing by at most one.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldPlan {
    fold_count: usize,
    assignments: BTreeMap<UserId, usize>,
    seed: u64,
}

impl FoldPlan {
    pub fn plan(users: &BTreeSet<UserId>, fold_count: usize, seed: u64) -> Result<Self, HarnessError> {
        if fold_count == 0 || users.len() < fold_count {
            return Err(HarnessError::TooFewUsers { user_count: users.len(), fold_count });
        }
        let mut shuffled: Vec<&UserId> = users.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        shuffled.shuffle(&mut rng);
        let assignments = shuffled
            .into_iter()
            .enumerate()
            .map(|(pos, user)| (user.clone(), pos % fold_count))
            .collect();
        Ok(FoldPlan { fold_count, assignments, seed })
    }

    pub fn fold_count(&self) -> usize {
        self.fold_count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_of(&self, user: &UserId) -> Option<usize> {
        self.assignments.get(user).copied()
    }

    pub fn users_in_fold(&self, fold: usize) -> Vec<&UserId> {
        self.assignments.iter().filter(|(_, &f)| f == fold).map(|(u, _)| u).collect()
    }

    pub fn assignments(&self) -> &BTreeMap<UserId, usize> {
        &self.assignments
    }
}

/// One test user's three-way split. The test set is fixed at construction;
/// the profile (`train`) grows only by ratings moved out of the candidate
/// set, so the three parts stay disjoint and their union constant.
#[derive(Clone, Debug, PartialEq)]
pub struct UserSplit {
    user: UserId,
    train: Vec<Rating>,
    candidate: BTreeMap<ItemId, Rating>,
    test: Vec<Rating>,
}

impl UserSplit {
    pub fn split(user: UserId, ratings: &[Rating], seed: u64) -> Result<Self, HarnessError> {
        if ratings.len() < MIN_PROFILE_SIZE {
            return Err(HarnessError::InsufficientRatings(user));
        }
        let mut sorted: Vec<&Rating> = ratings.iter().collect();
        sorted.sort();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sorted.shuffle(&mut rng);
        let mut test: Vec<Rating> = sorted[..TEST_SET_SIZE].iter().map(|r| (*r).clone()).collect();
        test.sort();
        let candidate = sorted[TEST_SET_SIZE..]
            .iter()
            .map(|r| (r.item().clone(), (*r).clone()))
            .collect();
        Ok(UserSplit { user, train: Vec::new(), candidate, test })
    }

    pub fn user(&self) -> &UserId {
        &self.user
    }

    pub fn train(&self) -> &[Rating] {
        &self.train
    }

    pub fn test(&self) -> &[Rating] {
        &self.test
    }

    pub fn candidate_len(&self) -> usize {
        self.candidate.len()
    }

    pub fn candidate_items(&self) -> BTreeSet<ItemId> {
        self.candidate.keys().cloned().collect()
    }

    /// Move one rating from the candidate set into the profile. Returns
    /// false if the item is not (or no longer) a candidate.
    pub fn elicit(&mut self, item: &ItemId) -> bool {
        match self.candidate.remove(item) {
            Some(rating) => {
                self.train.push(rating);
                true
            }
            None => false,
        }
    }
}

/// Assemble the ratings a model may train on when `test_fold` is held out.
///
/// The pool is every target rating of non-test-fold users, plus whatever
/// the test-fold users' profiles have accumulated, plus (cross-domain) the
/// entire auxiliary dataset. Test and candidate ratings never enter.
pub fn build_training_pool(
    plan: &FoldPlan,
    test_fold: usize,
    target: &Dataset,
    auxiliary: &Dataset,
    scenario: Scenario,
    splits: &BTreeMap<UserId, UserSplit>,
) -> Result<Vec<Rating>, HarnessError> {
    let mut pool: Vec<Rating> = target
        .ratings()
        .iter()
        .filter(|r| plan.fold_of(r.user()) != Some(test_fold))
        .cloned()
        .collect();
    for user in plan.users_in_fold(test_fold) {
        let split = splits.get(user).ok_or_else(|| HarnessError::MissingSplit(user.clone()))?;
        pool.extend(split.train().iter().cloned());
    }
    if scenario == Scenario::CrossDomain {
        pool.extend(auxiliary.ratings().iter().cloned());
    }
    Ok(pool)
}

/// One synchronous elicitation round: every user with a non-empty candidate
/// set moves their top-ranked candidate into the profile. Returns how many
/// ratings moved.
pub fn elicit_step(
    model: &FactorModel,
    strategy: StrategyKind,
    stats: &RatingStats,
    splits: &mut BTreeMap<UserId, UserSplit>,
) -> Result<usize, StrategyError> {
    let mut moved = 0;
    for (user, split) in splits.iter_mut() {
        if split.candidate_len() == 0 {
            continue;
        }
        let candidates = split.candidate_items();
        let ranked = rank_for(strategy, model, user, stats, &candidates)?;
        let top = ranked.first().expect("ranking of non-empty set is non-empty");
        let took = split.elicit(top);
        debug_assert!(took, "top-ranked item came from the candidate set");
        moved += 1;
    }
    Ok(moved)
}

/// Mean absolute error over (predicted, actual) pairs.
pub fn mae(pairs: &[(f64, f64)]) -> Result<f64, HarnessError> {
    if pairs.is_empty() {
        return Err(HarnessError::EmptyTestSet);
    }
    let total: f64 = pairs.iter().map(|(p, a)| (p - a).abs()).sum();
    Ok(total / pairs.len() as f64)
}

/// Entropy (natural log) of the item-occurrence distribution across all
/// users' recommendation lists. Zero when every list names the same single
/// item; higher when attention spreads over more items.
pub fn spread(lists: &BTreeMap<UserId, Vec<ItemId>>) -> Result<f64, HarnessError> {
    let mut occurrences: BTreeMap<&ItemId, u64> = BTreeMap::new();
    let mut total = 0u64;
    for list in lists.values() {
        for item in list {
            *occurrences.entry(item).or_insert(0) += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(HarnessError::NoRecommendations);
    }
    let n = total as f64;
    let mut entropy = 0.0;
    for &count in occurrences.values() {
        let p = count as f64 / n;
        entropy -= p * p.ln();
    }
    Ok(entropy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    LowerIsBetter,
    HigherIsBetter,
}

/// Percent improvement of a metric over a baseline.
pub fn improvement(with_al: f64, baseline: f64, direction: Direction) -> Result<f64, HarnessError> {
    if !(baseline > 0.0) {
        return Err(HarnessError::ZeroBaseline);
    }
    Ok(match direction {
        Direction::LowerIsBetter => 100.0 * (baseline - with_al) / baseline,
        Direction::HigherIsBetter => 100.0 * (with_al - baseline) / baseline,
    })
}

/// Fold-averaged metrics for one (scenario, strategy, iteration) cell.
/// `strategy` is None for the baseline, which reports only iteration 0.
/// Improvements are relative to this run's iteration 0 and None when the
/// baseline metric is zero or the row is itself the baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub scenario: Scenario,
    pub strategy: Option<StrategyKind>,
    pub iteration: usize,
    pub mae: f64,
    pub spread: f64,
    pub improvement_mae: Option<f64>,
    pub improvement_spread: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub hyperparams: Hyperparams,
    pub fold_count: usize,
    pub max_elicited: usize,
    pub top_n: usize,
    pub seed: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            hyperparams: Hyperparams::default(),
            fold_count: 5,
            max_elicited: 5,
            top_n: 10,
            seed: 0,
        }
    }
}

/// Run the full cross-validated elicitation simulation for one scenario and
/// one strategy (or the no-elicitation baseline).
///
/// Fold assignment and per-user splits depend only on the master seed and
/// the user ids, never on the scenario or strategy, so iteration-0 metrics
/// agree across strategies and scenarios share their test sets. Folds run
/// in parallel; results are bit-identical regardless of thread schedule.
pub fn run_experiment(
    target: &Dataset,
    auxiliary: &Dataset,
    scenario: Scenario,
    strategy: Option<StrategyKind>,
    settings: &RunSettings,
) -> Result<Vec<ExperimentResult>, HarnessError> {
    settings.hyperparams.validate()?;
    let users = target.user_set();
    let plan = FoldPlan::plan(&users, settings.fold_count, child_seed(settings.seed, "folds", ""))?;
    let iterations = if strategy.is_some() { settings.max_elicited } else { 0 };

    let fold_curves: Vec<Vec<(f64, f64)>> = (0..plan.fold_count())
        .into_par_iter()
        .map(|fold| run_fold(target, auxiliary, scenario, strategy, settings, &plan, fold, iterations))
        .collect::<Result<_, _>>()?;

    let folds = fold_curves.len() as f64;
    let mut results = Vec::with_capacity(iterations + 1);
    let mut base = None;
    for t in 0..=iterations {
        let mae_t = fold_curves.iter().map(|curve| curve[t].0).sum::<f64>() / folds;
        let spread_t = fold_curves.iter().map(|curve| curve[t].1).sum::<f64>() / folds;
        let (base_mae, base_spread) = *base.get_or_insert((mae_t, spread_t));
        let (improvement_mae, improvement_spread) = if strategy.is_some() {
            (
                improvement(mae_t, base_mae, Direction::LowerIsBetter).ok(),
                improvement(spread_t, base_spread, Direction::HigherIsBetter).ok(),
            )
        } else {
            (None, None)
        };
        results.push(ExperimentResult {
            scenario,
            strategy,
            iteration: t,
            mae: mae_t,
            spread: spread_t,
            improvement_mae,
            improvement_spread,
        });
    }
    Ok(results)
}

#[allow(clippy::too_many_arguments)]
fn run_fold(
    target: &Dataset,
    auxiliary: &Dataset,
    scenario: Scenario,
    strategy: Option<StrategyKind>,
    settings: &RunSettings,
    plan: &FoldPlan,
    fold: usize,
    iterations: usize,
) -> Result<Vec<(f64, f64)>, HarnessError> {
    let mut splits: BTreeMap<UserId, UserSplit> = BTreeMap::new();
    for user in plan.users_in_fold(fold) {
        let ratings: Vec<Rating> = target.ratings_of(user).cloned().collect();
        let split =
            UserSplit::split(user.clone(), &ratings, child_seed(settings.seed, "split", user.as_str()))?;
        splits.insert(user.clone(), split);
    }

    let universe = target.items();
    let mut curve = Vec::with_capacity(iterations + 1);
    for t in 0..=iterations {
        let pool = build_training_pool(plan, fold, target, auxiliary, scenario, &splits)?;
        let model = train(&pool, &settings.hyperparams)?;

        let mut pairs = Vec::new();
        for (user, split) in &splits {
            for r in split.test() {
                pairs.push((model.predict(user, r.item()), f64::from(r.value())));
            }
        }
        let mae_t = mae(&pairs)?;

        let mut lists = BTreeMap::new();
        for (user, split) in &splits {
            let exclude: BTreeSet<ItemId> = split.train().iter().map(|r| r.item().clone()).collect();
            lists.insert(user.clone(), model.recommend(user, universe, &exclude, settings.top_n));
        }
        let spread_t = spread(&lists)?;
        curve.push((mae_t, spread_t));

        if t < iterations {
            let strategy = strategy.expect("elicitation iterations imply a strategy");
            let target_pool: Vec<Rating> =
                pool.into_iter().filter(|r| r.domain() == Domain::Target).collect();
            let stats_source = Dataset::from_ratings(target_pool, Domain::Target)?;
            let population = stats_source.user_set();
            let stats = RatingStats::from_dataset(&stats_source, &population)?;
            elicit_step(&model, strategy, &stats, &mut splits)?;
        }
    }
    Ok(curve)
}
