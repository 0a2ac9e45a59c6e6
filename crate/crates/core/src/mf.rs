//! Biased matrix factorization trained one factor at a time.
//!
//! The model is r = mu + b_u + b_i + p_u . q_i. Biases are damped means;
//! factors are learned by stochastic gradient descent, one factor column at
//! a time while earlier columns stay frozen inside a per-rating offset.
//! Training is fully deterministic: constant initialization and a sweep
//! order sorted by (user row, item row).

use std::collections::HashMap;
use std::io::{self, Write};

use thiserror::Error;

use crate::data::{ItemId, Rating, UserId};

/// Damping constant for the bias means: an item or user with few ratings is
/// pulled toward the global mean.
pub const BIAS_DAMPING: f64 = 25.0;

/// Initial value of every factor entry.
pub const FACTOR_INIT: f64 = 0.1;

/// Relative slack allowed before an epoch-over-epoch loss increase is
/// reported. SGD loss is not strictly monotone, so violations only warn.
const LOSS_INCREASE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperparams {
    pub factor_count: usize,
    pub learning_rate: f64,
    pub regularization: f64,
    pub epochs_per_factor: usize,
    pub rating_min: f64,
    pub rating_max: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            factor_count: 30,
            learning_rate: 0.001,
            regularization: 0.015,
            epochs_per_factor: 100,
            rating_min: 1.0,
            rating_max: 5.0,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<(), MfError> {
        let bad = |msg: &str| Err(MfError::InvalidHyperparams(msg.to_string()));
        if self.factor_count == 0 {
            return bad("factor_count must be at least 1");
        }
        if self.epochs_per_factor == 0 {
            return bad("epochs_per_factor must be at least 1");
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return bad("learning_rate must be finite and positive");
        }
        if !self.regularization.is_finite() || self.regularization < 0.0 {
            return bad("regularization must be finite and non-negative");
        }
        if !self.rating_min.is_finite()
            || !self.rating_max.is_finite()
            || self.rating_min >= self.rating_max
        {
            return bad("rating bounds must be finite with rating_min < rating_max");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MfError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error("model parameters became non-finite while training factor {factor}")]
    Diverged { factor: usize },
    #[error("invalid model parts: {0}")]
    InvalidParts(String),
}

/// A trained factorization model. All parameters are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorModel {
    factor_count: usize,
    global_mean: f64,
    rating_min: f64,
    rating_max: f64,
    users: Vec<UserId>,
    items: Vec<ItemId>,
    user_index: HashMap<UserId, usize>,
    item_index: HashMap<ItemId, usize>,
    user_bias: Vec<f64>,
    item_bias: Vec<f64>,
    user_factors: Vec<f64>,
    item_factors: Vec<f64>,
}

/// Per-sample gradient of 0.5*err^2 + 0.5*reg*(p^2 + q^2) with respect to
/// (p, q), where err = value - offset - p*q. The SGD sweep and the batch
/// objective below both step through this function.
#[inline]
fn sample_gradient(err: f64, p: f64, q: f64, regularization: f64) -> (f64, f64) {
    (regularization * p - err * q, regularization * q - err * p)
}

/// Objective and analytic gradient of one factor column over a batch.
///
/// `interactions` holds (user_row, item_row, value, offset) where offset is
/// the estimate from biases plus previously trained factors. The objective
/// is sum of 0.5*(value - offset - p_u*q_i)^2 + 0.5*reg*(p_u^2 + q_i^2)
/// over interactions, exactly the quantity each SGD sweep descends.
pub fn factor_objective(
    interactions: &[(usize, usize, f64, f64)],
    user_factor: &[f64],
    item_factor: &[f64],
    regularization: f64,
) -> (f64, Vec<f64>, Vec<f64>) {
    let mut objective = 0.0;
    let mut grad_user = vec![0.0; user_factor.len()];
    let mut grad_item = vec![0.0; item_factor.len()];
    for &(u, i, value, offset) in interactions {
        let p = user_factor[u];
        let q = item_factor[i];
        let err = value - offset - p * q;
        objective += 0.5 * err * err + 0.5 * regularization * (p * p + q * q);
        let (gp, gq) = sample_gradient(err, p, q, regularization);
        grad_user[u] += gp;
        grad_item[i] += gq;
    }
    (objective, grad_user, grad_item)
}

/// Train a model on a set of ratings. The pool may mix domains; item
/// identifiers keep the catalogs apart. (user, item) pairs are expected to
/// be unique.
pub fn train(ratings: &[Rating], hp: &Hyperparams) -> Result<FactorModel, MfError> {
    hp.validate()?;
    if ratings.is_empty() {
        return Err(MfError::EmptyTrainingSet);
    }

    let mut users: Vec<UserId> = ratings.iter().map(|r| r.user().clone()).collect();
    users.sort();
    users.dedup();
    let mut items: Vec<ItemId> = ratings.iter().map(|r| r.item().clone()).collect();
    items.sort();
    items.dedup();
    let user_index: HashMap<UserId, usize> =
        users.iter().enumerate().map(|(idx, u)| (u.clone(), idx)).collect();
    let item_index: HashMap<ItemId, usize> =
        items.iter().enumerate().map(|(idx, i)| (i.clone(), idx)).collect();

    let mut triples: Vec<(u32, u32, f64)> = ratings
        .iter()
        .map(|r| {
            (user_index[r.user()] as u32, item_index[r.item()] as u32, f64::from(r.value()))
        })
        .collect();
    triples.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    let n = triples.len() as f64;
    let global_mean = triples.iter().map(|t| t.2).sum::<f64>() / n;

    let mut item_bias = vec![0.0; items.len()];
    let mut item_counts = vec![0u32; items.len()];
    for &(_, i, value) in &triples {
        item_bias[i as usize] += value - global_mean;
        item_counts[i as usize] += 1;
    }
    for (b, &c) in item_bias.iter_mut().zip(&item_counts) {
        *b /= BIAS_DAMPING + f64::from(c);
    }

    let mut user_bias = vec![0.0; users.len()];
    let mut user_counts = vec![0u32; users.len()];
    for &(u, i, value) in &triples {
        user_bias[u as usize] += value - global_mean - item_bias[i as usize];
        user_counts[u as usize] += 1;
    }
    for (b, &c) in user_bias.iter_mut().zip(&user_counts) {
        *b /= BIAS_DAMPING + f64::from(c);
    }

    // offset[s]: estimate for triple s from biases plus already-trained
    // factors. The column being trained is excluded.
    let mut offsets: Vec<f64> = triples
        .iter()
        .map(|&(u, i, _)| global_mean + user_bias[u as usize] + item_bias[i as usize])
        .collect();

    let k = hp.factor_count;
    let mut user_factors = vec![FACTOR_INIT; users.len() * k];
    let mut item_factors = vec![FACTOR_INIT; items.len() * k];
    let mut user_col = vec![FACTOR_INIT; users.len()];
    let mut item_col = vec![FACTOR_INIT; items.len()];

    for factor in 0..k {
        user_col.fill(FACTOR_INIT);
        item_col.fill(FACTOR_INIT);
        let mut prev_sse = f64::INFINITY;
        for epoch in 0..hp.epochs_per_factor {
            let mut sse = 0.0;
            for (s, &(u, i, value)) in triples.iter().enumerate() {
                let (u, i) = (u as usize, i as usize);
                let p = user_col[u];
                let q = item_col[i];
                let err = value - offsets[s] - p * q;
                sse += err * err;
                let (gp, gq) = sample_gradient(err, p, q, hp.regularization);
                user_col[u] = p - hp.learning_rate * gp;
                item_col[i] = q - hp.learning_rate * gq;
            }
            if sse > prev_sse * (1.0 + LOSS_INCREASE_TOLERANCE) {
                log::warn!(
                    "loss increased at factor {factor} epoch {epoch}: {prev_sse} -> {sse}"
                );
            }
            prev_sse = sse;
        }
        for (s, &(u, i, _)) in triples.iter().enumerate() {
            offsets[s] += user_col[u as usize] * item_col[i as usize];
        }
        if !user_col.iter().chain(item_col.iter()).all(|v| v.is_finite()) {
            return Err(MfError::Diverged { factor });
        }
        for (u, &v) in user_col.iter().enumerate() {
            user_factors[u * k + factor] = v;
        }
        for (i, &v) in item_col.iter().enumerate() {
            item_factors[i * k + factor] = v;
        }
    }

    Ok(FactorModel {
        factor_count: k,
        global_mean,
        rating_min: hp.rating_min,
        rating_max: hp.rating_max,
        users,
        items,
        user_index,
        item_index,
        user_bias,
        item_bias,
        user_factors,
        item_factors,
    })
}

impl FactorModel {
    /// Assemble a model directly from parameters. Intended for tests and
    /// for loading dumped models; validates shapes and finiteness.
    pub fn from_parts(
        global_mean: f64,
        rating_min: f64,
        rating_max: f64,
        users: Vec<(UserId, f64, Vec<f64>)>,
        items: Vec<(ItemId, f64, Vec<f64>)>,
    ) -> Result<Self, MfError> {
        let invalid = |msg: String| MfError::InvalidParts(msg);
        if !global_mean.is_finite() {
            return Err(invalid("global mean is not finite".into()));
        }
        if !rating_min.is_finite() || !rating_max.is_finite() || rating_min >= rating_max {
            return Err(invalid("rating bounds must be finite with min < max".into()));
        }
        let factor_count = users
            .first()
            .map(|(_, _, f)| f.len())
            .or_else(|| items.first().map(|(_, _, f)| f.len()))
            .unwrap_or(0);

        let mut user_ids = Vec::with_capacity(users.len());
        let mut user_bias = Vec::with_capacity(users.len());
        let mut user_factors = Vec::with_capacity(users.len() * factor_count);
        for (id, bias, factors) in users {
            if factors.len() != factor_count {
                return Err(invalid(format!("user {id} has {} factors, expected {factor_count}", factors.len())));
            }
            if !bias.is_finite() || factors.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!("user {id} has non-finite parameters")));
            }
            user_ids.push(id);
            user_bias.push(bias);
            user_factors.extend(factors);
        }
        let mut item_ids = Vec::with_capacity(items.len());
        let mut item_bias = Vec::with_capacity(items.len());
        let mut item_factors = Vec::with_capacity(items.len() * factor_count);
        for (id, bias, factors) in items {
            if factors.len() != factor_count {
                return Err(invalid(format!("item {id} has {} factors, expected {factor_count}", factors.len())));
            }
            if !bias.is_finite() || factors.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!("item {id} has non-finite parameters")));
            }
            item_ids.push(id);
            item_bias.push(bias);
            item_factors.extend(factors);
        }
        let user_index: HashMap<UserId, usize> =
            user_ids.iter().enumerate().map(|(idx, u)| (u.clone(), idx)).collect();
        if user_index.len() != user_ids.len() {
            return Err(invalid("duplicate user id".into()));
        }
        let item_index: HashMap<ItemId, usize> =
            item_ids.iter().enumerate().map(|(idx, i)| (i.clone(), idx)).collect();
        if item_index.len() != item_ids.len() {
            return Err(invalid("duplicate item id".into()));
        }
        Ok(FactorModel {
            factor_count,
            global_mean,
            rating_min,
            rating_max,
            users: user_ids,
            items: item_ids,
            user_index,
            item_index,
            user_bias,
            item_bias,
            user_factors,
            item_factors,
        })
    }

    pub fn factor_count(&self) -> usize {
        self.factor_count
    }

    pub fn global_mean(&self) -> f64 {
        self.global_mean
    }

    pub fn knows_user(&self, user: &UserId) -> bool {
        self.user_index.contains_key(user)
    }

    pub fn knows_item(&self, item: &ItemId) -> bool {
        self.item_index.contains_key(item)
    }

    /// Predict a rating. Total: unknown users or items fall back to the
    /// parts of the model that are known (biases, then the global mean).
    /// The result is clamped to the rating scale.
    pub fn predict(&self, user: &UserId, item: &ItemId) -> f64 {
        let u = self.user_index.get(user);
        let i = self.item_index.get(item);
        let raw = match (u, i) {
            (Some(&u), Some(&i)) => {
                let k = self.factor_count;
                let uf = &self.user_factors[u * k..(u + 1) * k];
                let if_ = &self.item_factors[i * k..(i + 1) * k];
                let dot: f64 = uf.iter().zip(if_).map(|(p, q)| p * q).sum();
                self.global_mean + self.user_bias[u] + self.item_bias[i] + dot
            }
            (Some(&u), None) => self.global_mean + self.user_bias[u],
            (None, Some(&i)) => self.global_mean + self.item_bias[i],
            (None, None) => self.global_mean,
        };
        raw.clamp(self.rating_min, self.rating_max)
    }

    /// Top-n recommendation over `universe` minus `exclude`, ordered by
    /// descending prediction with ties broken by ascending item id.
    pub fn recommend(
        &self,
        user: &UserId,
        universe: &std::collections::BTreeSet<ItemId>,
        exclude: &std::collections::BTreeSet<ItemId>,
        n: usize,
    ) -> Vec<ItemId> {
        let mut scored: Vec<(f64, &ItemId)> = universe
            .iter()
            .filter(|i| !exclude.contains(*i))
            .map(|i| (self.predict(user, i), i))
            .collect();
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite scores").then_with(|| a.1.cmp(b.1)));
        scored.into_iter().take(n).map(|(_, i)| i.clone()).collect()
    }

    /// Lowest allowed prediction.
    pub fn rating_min(&self) -> f64 {
        self.rating_min
    }

    /// Highest allowed prediction.
    pub fn rating_max(&self) -> f64 {
        self.rating_max
    }

    /// Write a plain-text dump of all parameters:
    ///
    /// ```text
    /// funk-model v1
    /// factors <k>
    /// global_mean <mu>
    /// users <n>
    /// items <m>
    /// user <id> <bias> <f0> ... <fk-1>   (n lines)
    /// item <id> <bias> <f0> ... <fk-1>   (m lines)
    /// ```
    pub fn write_dump<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "funk-model v1")?;
        writeln!(w, "factors {}", self.factor_count)?;
        writeln!(w, "global_mean {}", self.global_mean)?;
        writeln!(w, "users {}", self.users.len())?;
        writeln!(w, "items {}", self.items.len())?;
        let k = self.factor_count;
        for (idx, user) in self.users.iter().enumerate() {
            write!(w, "user {} {}", user, self.user_bias[idx])?;
            for v in &self.user_factors[idx * k..(idx + 1) * k] {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        for (idx, item) in self.items.iter().enumerate() {
            write!(w, "item {} {}", item, self.item_bias[idx])?;
            for v in &self.item_factors[idx * k..(idx + 1) * k] {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Domain;

    fn user(id: &str) -> UserId {
        UserId::new(id)
    }

    fn titem(id: &str) -> ItemId {
        ItemId::new(Domain::Target, id)
    }

    fn rating(u: &str, i: &str, v: u8) -> Rating {
        Rating::new(user(u), titem(i), v).unwrap()
    }

    fn small_hp() -> Hyperparams {
        Hyperparams { factor_count: 4, epochs_per_factor: 50, ..Hyperparams::default() }
    }

    #[test]
    fn default_hyperparams() {
        let hp = Hyperparams::default();
        assert_eq!(hp.factor_count, 30);
        assert_eq!(hp.learning_rate, 0.001);
        assert_eq!(hp.regularization, 0.015);
        assert_eq!(hp.epochs_per_factor, 100);
        assert_eq!(hp.rating_min, 1.0);
        assert_eq!(hp.rating_max, 5.0);
        hp.validate().unwrap();
    }

    #[test]
    fn invalid_hyperparams_are_rejected() {
        let cases = [
            Hyperparams { factor_count: 0, ..Hyperparams::default() },
            Hyperparams { epochs_per_factor: 0, ..Hyperparams::default() },
            Hyperparams { learning_rate: 0.0, ..Hyperparams::default() },
            Hyperparams { learning_rate: f64::NAN, ..Hyperparams::default() },
            Hyperparams { regularization: -0.1, ..Hyperparams::default() },
            Hyperparams { rating_min: 5.0, rating_max: 1.0, ..Hyperparams::default() },
        ];
        for hp in cases {
            assert!(matches!(
                train(&[rating("u", "i", 3)], &hp),
                Err(MfError::InvalidHyperparams(_))
            ));
        }
    }

    #[test]
    fn empty_training_set_is_an_error() {
        assert_eq!(train(&[], &Hyperparams::default()), Err(MfError::EmptyTrainingSet));
    }

    #[test]
    fn damped_biases_match_hand_computation() {
        // mu = 4; both items have zero mean offset, so b_i = 0 and
        // b_u1 = (5-4-0 + 4-4-0) / (25+2) = 1/27.
        let rs = vec![rating("u1", "i1", 5), rating("u2", "i1", 3), rating("u1", "i2", 4)];
        let model = train(&rs, &small_hp()).unwrap();
        assert_eq!(model.global_mean(), 4.0);
        let unknown = titem("nope");
        assert!((model.predict(&user("u1"), &unknown) - (4.0 + 1.0 / 27.0)).abs() < 1e-12);
        assert!((model.predict(&user("unseen"), &titem("i1")) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_rating_is_fit_by_the_biases() {
        // One observation: the mean alone explains it, and with a modest
        // factor count the untrained-factor drift stays under 0.1.
        let model = train(&[rating("u1", "i1", 4)], &small_hp()).unwrap();
        let p = model.predict(&user("u1"), &titem("i1"));
        assert!((p - 4.0).abs() <= 0.1, "predicted {p}, want within 0.1 of 4");
    }

    #[test]
    fn training_is_deterministic() {
        let rs: Vec<Rating> = (0..12)
            .map(|s| rating(&format!("u{}", s % 4), &format!("i{}", s % 3), (s % 5) as u8 + 1))
            .collect();
        let a = train(&rs, &small_hp()).unwrap();
        let b = train(&rs, &small_hp()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn training_order_does_not_matter() {
        let rs: Vec<Rating> = (0..12)
            .map(|s| rating(&format!("u{}", s % 4), &format!("i{}", s % 3), (s % 5) as u8 + 1))
            .collect();
        let mut shuffled = rs.clone();
        shuffled.reverse();
        shuffled.swap(0, 5);
        assert_eq!(train(&rs, &small_hp()).unwrap(), train(&shuffled, &small_hp()).unwrap());
    }

    #[test]
    fn prediction_fallback_chain() {
        let model = FactorModel::from_parts(
            3.0,
            1.0,
            5.0,
            vec![(user("u1"), 0.5, vec![1.0])],
            vec![(titem("i1"), -0.25, vec![0.5])],
        )
        .unwrap();
        assert_eq!(model.predict(&user("u1"), &titem("i1")), 3.0 + 0.5 - 0.25 + 0.5);
        assert_eq!(model.predict(&user("u1"), &titem("new")), 3.5);
        assert_eq!(model.predict(&user("new"), &titem("i1")), 2.75);
        assert_eq!(model.predict(&user("new"), &titem("new")), 3.0);
    }

    #[test]
    fn predictions_clamp_to_the_scale() {
        let model = FactorModel::from_parts(
            3.0,
            1.0,
            5.0,
            vec![(user("hi"), 4.0, vec![]), (user("lo"), -4.0, vec![])],
            vec![],
        )
        .unwrap();
        assert_eq!(model.predict(&user("hi"), &titem("x")), 5.0);
        assert_eq!(model.predict(&user("lo"), &titem("x")), 1.0);
    }

    #[test]
    fn from_parts_rejects_bad_shapes_and_values() {
        assert!(matches!(
            FactorModel::from_parts(
                3.0,
                1.0,
                5.0,
                vec![(user("u"), 0.0, vec![1.0, 2.0]), (user("v"), 0.0, vec![1.0])],
                vec![],
            ),
            Err(MfError::InvalidParts(_))
        ));
        assert!(matches!(
            FactorModel::from_parts(3.0, 1.0, 5.0, vec![(user("u"), f64::NAN, vec![])], vec![]),
            Err(MfError::InvalidParts(_))
        ));
        assert!(matches!(
            FactorModel::from_parts(f64::INFINITY, 1.0, 5.0, vec![], vec![]),
            Err(MfError::InvalidParts(_))
        ));
    }

    #[test]
    fn recommend_orders_by_score_then_id() {
        let model = FactorModel::from_parts(
            3.0,
            1.0,
            5.0,
            vec![(user("u"), 0.0, vec![1.0])],
            vec![
                (titem("b"), 0.5, vec![0.0]),
                (titem("a"), 0.5, vec![0.0]),
                (titem("c"), 1.0, vec![0.0]),
                (titem("d"), -1.0, vec![0.0]),
            ],
        )
        .unwrap();
        let universe: std::collections::BTreeSet<ItemId> =
            ["a", "b", "c", "d"].iter().map(|s| titem(s)).collect();
        let exclude: std::collections::BTreeSet<ItemId> = [titem("d")].into_iter().collect();

        let top = model.recommend(&user("u"), &universe, &std::collections::BTreeSet::new(), 3);
        assert_eq!(top, vec![titem("c"), titem("a"), titem("b")]);

        let all = model.recommend(&user("u"), &universe, &exclude, 10);
        assert_eq!(all, vec![titem("c"), titem("a"), titem("b")]);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let interactions =
            [(0usize, 0usize, 4.0, 3.5), (0, 1, 2.0, 3.1), (1, 0, 5.0, 3.9), (1, 1, 1.0, 2.8)];
        let user_factor = [0.3, -0.2];
        let item_factor = [0.15, 0.4];
        let reg = 0.02;
        let (_, grad_u, grad_i) = factor_objective(&interactions, &user_factor, &item_factor, reg);

        let h = 1e-6;
        for idx in 0..user_factor.len() {
            let mut plus = user_factor;
            let mut minus = user_factor;
            plus[idx] += h;
            minus[idx] -= h;
            let (jp, _, _) = factor_objective(&interactions, &plus, &item_factor, reg);
            let (jm, _, _) = factor_objective(&interactions, &minus, &item_factor, reg);
            let numeric = (jp - jm) / (2.0 * h);
            let rel = (grad_u[idx] - numeric).abs() / numeric.abs().max(1e-12);
            assert!(rel < 1e-6, "user grad {idx}: analytic {} numeric {numeric}", grad_u[idx]);
        }
        for idx in 0..item_factor.len() {
            let mut plus = item_factor;
            let mut minus = item_factor;
            plus[idx] += h;
            minus[idx] -= h;
            let (jp, _, _) = factor_objective(&interactions, &user_factor, &plus, reg);
            let (jm, _, _) = factor_objective(&interactions, &user_factor, &minus, reg);
            let numeric = (jp - jm) / (2.0 * h);
            let rel = (grad_i[idx] - numeric).abs() / numeric.abs().max(1e-12);
            assert!(rel < 1e-6, "item grad {idx}: analytic {} numeric {numeric}", grad_i[idx]);
        }
    }

    #[test]
    fn runaway_learning_rate_reports_divergence() {
        let hp = Hyperparams { learning_rate: 1e6, ..small_hp() };
        let rs = vec![rating("u1", "i1", 5), rating("u2", "i1", 1), rating("u1", "i2", 3)];
        assert!(matches!(train(&rs, &hp), Err(MfError::Diverged { .. })));
    }

    #[test]
    fn dump_lists_every_parameter_row() {
        let model = FactorModel::from_parts(
            3.25,
            1.0,
            5.0,
            vec![(user("u1"), 0.1, vec![0.5, -0.5])],
            vec![(titem("i1"), -0.1, vec![0.25, 0.75]), (titem("i2"), 0.0, vec![0.0, 0.0])],
        )
        .unwrap();
        let mut buf = Vec::new();
        model.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "funk-model v1");
        assert_eq!(lines[1], "factors 2");
        assert_eq!(lines[2], "global_mean 3.25");
        assert_eq!(lines[3], "users 1");
        assert_eq!(lines[4], "items 2");
        assert_eq!(lines[5], "user u1 0.1 0.5 -0.5");
        assert_eq!(lines[6], "item target:i1 -0.1 0.25 0.75");
        assert_eq!(lines[7], "item target:i2 0 0 0");
        assert_eq!(lines.len(), 8);
    }
}
