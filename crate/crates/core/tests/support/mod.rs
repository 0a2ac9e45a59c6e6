//! Fixtures shared by integration test binaries.

use elicit_core::data::{Domain, ItemId, Rating, UserId};
use elicit_core::mf::{train, Hyperparams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 50x50 rank-1 grid: value(u, i) = 3 + a_u * b_i with a in {-1, 0, 1} and
/// b in {0, 1, 2}, every cell an exact integer on the 1..=5 scale. 80% of
/// cells train, the rest are held out.
pub fn rank1_split(seed: u64) -> (Vec<Rating>, Vec<(UserId, ItemId, f64)>) {
    let a = [-1.0, 0.0, 1.0];
    let b = [0.0, 1.0, 2.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed = Vec::new();
    let mut held_out = Vec::new();
    for u in 0..50usize {
        let user = UserId::new(format!("u{u:02}"));
        for i in 0..50usize {
            let value = 3.0 + a[u % 3] * b[i % 3];
            let item = ItemId::new(Domain::Target, format!("i{i:02}"));
            if rng.random::<f64>() < 0.8 {
                observed.push(Rating::new(user.clone(), item, value as u8).unwrap());
            } else {
                held_out.push((user.clone(), item, value));
            }
        }
    }
    (observed, held_out)
}

/// Trains on the observed cells and returns (held-out RMSE, holdout size).
pub fn rank1_holdout_rmse(seed: u64) -> (f64, usize) {
    let (observed, held_out) = rank1_split(seed);
    let hp = Hyperparams {
        factor_count: 4,
        learning_rate: 0.005,
        epochs_per_factor: 200,
        ..Hyperparams::default()
    };
    let model = train(&observed, &hp).unwrap();
    let sse: f64 = held_out
        .iter()
        .map(|(user, item, value)| {
            let err = model.predict(user, item) - value;
            err * err
        })
        .sum();
    ((sse / held_out.len() as f64).sqrt(), held_out.len())
}
