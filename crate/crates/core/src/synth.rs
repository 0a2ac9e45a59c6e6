//! Seeded synthetic two-domain rating corpora.
//!
//! Users share one latent taste vector per domain; the auxiliary-domain
//! vector is correlated with the target-domain one by a planted coefficient
//! rho. Ratings are a low-rank signal plus Gaussian noise, rounded onto the
//! 1..=5 scale. Every user ends up with at least `min_per_domain` ratings
//! in each domain via rejection-resampling, so the harness split
//! preconditions always hold.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::data::{Dataset, Domain, ItemId, Rating, UserId};
use crate::seed::child_seed;

/// Strength of the low-rank signal relative to the rating scale midpoint.
const SIGNAL_SCALE: f64 = 1.5;

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub users: usize,
    pub target_items: usize,
    pub aux_items: usize,
    /// Probability that a (user, item) cell is observed.
    pub density: f64,
    /// Planted correlation between a user's target and auxiliary taste.
    pub correlation: f64,
    /// Reuse the target items' latent factors for the auxiliary catalog
    /// (requires equal item counts).
    pub shared_item_factors: bool,
    /// Standard deviation of the additive rating noise.
    pub noise: f64,
    /// Latent dimension of the planted structure.
    pub rank: usize,
    pub min_per_domain: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            users: 100,
            target_items: 200,
            aux_items: 200,
            density: 0.25,
            correlation: 0.8,
            shared_item_factors: false,
            noise: 0.5,
            rank: 4,
            min_per_domain: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |msg: String| Err(SynthError::InvalidSpec(msg));
        if self.users == 0 || self.target_items == 0 || self.aux_items == 0 {
            return bad("user and item counts must be positive".into());
        }
        if self.rank == 0 {
            return bad("rank must be positive".into());
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad(format!("density {} outside (0, 1]", self.density));
        }
        if !self.correlation.is_finite() || self.correlation.abs() > 1.0 {
            return bad(format!("correlation {} outside [-1, 1]", self.correlation));
        }
        if !self.noise.is_finite() || self.noise < 0.0 {
            return bad(format!("noise {} must be non-negative", self.noise));
        }
        if self.shared_item_factors && self.target_items != self.aux_items {
            return bad("shared item factors require equal item counts".into());
        }
        if self.min_per_domain > self.target_items || self.min_per_domain > self.aux_items {
            return bad(format!(
                "min_per_domain {} exceeds an item catalog size",
                self.min_per_domain
            ));
        }
        Ok(())
    }
}

fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.sample(StandardNormal)).collect()).collect()
}

fn rate(user_factor: &[f64], item_factor: &[f64], noise: f64, z: f64, rank: usize) -> u8 {
    let signal: f64 = user_factor.iter().zip(item_factor).map(|(a, b)| a * b).sum();
    let raw = 3.0 + SIGNAL_SCALE * signal / (rank as f64).sqrt() + noise * z;
    raw.round().clamp(1.0, 5.0) as u8
}

/// Generate the two domains. Deterministic in the spec, including its seed:
/// per-user observation patterns and noise draws come from child generators
/// keyed by domain and user index.
pub fn generate(spec: &SynthSpec) -> Result<(Dataset, Dataset), SynthError> {
    spec.validate()?;

    let mut user_rng = ChaCha8Rng::seed_from_u64(child_seed(spec.seed, "user-factors", ""));
    let target_taste = normal_matrix(&mut user_rng, spec.users, spec.rank);
    let independent = normal_matrix(&mut user_rng, spec.users, spec.rank);
    let rho = spec.correlation;
    let mix = (1.0 - rho * rho).max(0.0).sqrt();
    let aux_taste: Vec<Vec<f64>> = target_taste
        .iter()
        .zip(&independent)
        .map(|(t, e)| t.iter().zip(e).map(|(a, b)| rho * a + mix * b).collect())
        .collect();

    let mut item_rng = ChaCha8Rng::seed_from_u64(child_seed(spec.seed, "item-factors", ""));
    let target_items = normal_matrix(&mut item_rng, spec.target_items, spec.rank);
    let aux_items = if spec.shared_item_factors {
        target_items.clone()
    } else {
        normal_matrix(&mut item_rng, spec.aux_items, spec.rank)
    };

    let domain_ratings = |domain: Domain,
                          prefix: &str,
                          taste: &[Vec<f64>],
                          items: &[Vec<f64>]|
     -> Vec<Rating> {
        let mut out = Vec::new();
        for (u, user_factor) in taste.iter().enumerate() {
            let user = UserId::new(format!("u{u:05}"));
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(
                spec.seed,
                "observations",
                &format!("{}:{u}", domain.label()),
            ));
            let mut observed: Vec<bool> =
                (0..items.len()).map(|_| rng.random::<f64>() < spec.density).collect();
            let have = observed.iter().filter(|&&o| o).count();
            if have < spec.min_per_domain {
                let mut unrated: Vec<usize> =
                    (0..items.len()).filter(|&i| !observed[i]).collect();
                unrated.shuffle(&mut rng);
                for &i in unrated.iter().take(spec.min_per_domain - have) {
                    observed[i] = true;
                }
            }
            for (i, item_factor) in items.iter().enumerate() {
                if !observed[i] {
                    continue;
                }
                let z: f64 = rng.sample(StandardNormal);
                let value = rate(user_factor, item_factor, spec.noise, z, spec.rank);
                let item = ItemId::new(domain, format!("{prefix}{i:05}"));
                out.push(Rating::new(user.clone(), item, value).expect("rate() clamps on scale"));
            }
        }
        out
    };

    let target = domain_ratings(Domain::Target, "t", &target_taste, &target_items);
    let auxiliary = domain_ratings(Domain::Auxiliary, "a", &aux_taste, &aux_items);
    Ok((
        Dataset::from_ratings(target, Domain::Target).expect("one rating per (user, item) cell"),
        Dataset::from_ratings(auxiliary, Domain::Auxiliary).expect("one rating per (user, item) cell"),
    ))
}
