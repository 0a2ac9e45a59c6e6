//! Deterministic derivation of child seeds from a master seed.
//!
//! Every random decision in a run (fold assignment, per-user splits,
//! synthetic data, SGD schedules) draws from its own generator seeded by
//! `child_seed`. The derivation is a plain FNV-1a hash, so results are
//! reproducible across platforms and independent of evaluation order.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Derive the seed for one named purpose under a master seed.
///
/// `purpose` names the subsystem ("folds", "split", ...) and `key`
/// disambiguates instances within it (a user id, a fold number). The two are
/// hashed with a separator so ("ab", "c") and ("a", "bc") differ.
pub fn child_seed(master: u64, purpose: &str, key: &str) -> u64 {
    let mut h = FNV_OFFSET;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h = (h ^ u64::from(b)).wrapping_mul(FNV_PRIME);
        }
    };
    eat(&master.to_le_bytes());
    eat(purpose.as_bytes());
    eat(&[0xff]);
    eat(key.as_bytes());
    h
}
