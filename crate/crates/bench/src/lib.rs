//! Deterministic fixtures shared by the benchmark targets.

use std::collections::BTreeSet;

use elicit_core::data::{Dataset, Domain, ItemId, Rating, UserId};
use elicit_core::mf::FactorModel;
use elicit_core::synth::{generate, SynthSpec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-domain synthetic corpus sized for benchmarks.
pub fn corpus(users: usize, items_per_domain: usize, seed: u64) -> (Dataset, Dataset) {
    let spec = SynthSpec {
        users,
        target_items: items_per_domain,
        aux_items: items_per_domain,
        seed,
        ..SynthSpec::default()
    };
    generate(&spec).expect("benchmark spec is valid")
}

/// A factor model with random finite parameters plus the full candidate
/// universe it covers. Building it directly keeps benchmark setup cheap.
pub fn scoring_fixture(
    item_count: usize,
    factor_count: usize,
) -> (FactorModel, UserId, BTreeSet<ItemId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let factors = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..factor_count).map(|_| rng.random_range(-0.5..0.5)).collect()
    };
    let user = UserId::from("bench-user");
    let users = vec![(user.clone(), rng.random_range(-0.3..0.3), factors(&mut rng))];
    let items: Vec<(ItemId, f64, Vec<f64>)> = (0..item_count)
        .map(|i| {
            let id = ItemId::new(Domain::Target, format!("i{i:06}"));
            let bias = rng.random_range(-0.5..0.5);
            let fs = factors(&mut rng);
            (id, bias, fs)
        })
        .collect();
    let candidates: BTreeSet<ItemId> = items.iter().map(|(id, _, _)| id.clone()).collect();
    let model = FactorModel::from_parts(3.5, 1.0, 5.0, users, items)
        .expect("random parts are finite and well shaped");
    (model, user, candidates)
}

/// A dataset whose item popularity ramps linearly, for statistics-driven
/// scoring benchmarks.
pub fn popularity_dataset(item_count: usize, max_raters: usize) -> Dataset {
    let mut ratings = Vec::new();
    for i in 0..item_count {
        let raters = 1 + i % max_raters;
        for u in 0..raters {
            let user = UserId::from(format!("u{u:05}"));
            let item = ItemId::new(Domain::Target, format!("i{i:06}"));
            let value = 1 + ((u + i) % 5) as u8;
            ratings.push(Rating::new(user, item, value).expect("value is on the 1..=5 scale"));
        }
    }
    Dataset::from_ratings(ratings, Domain::Target).expect("constructed without duplicates")
}
