//! Ratings, datasets, and per-item rating statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Smallest expressible rating value.
pub const RATING_MIN: u8 = 1;
/// Largest expressible rating value.
pub const RATING_MAX: u8 = 5;

/// Which item catalog a rating belongs to.
///
/// Item identifiers are namespaced by domain, so `i1` in the target domain
/// and `i1` in the auxiliary domain are distinct items. Users are shared
/// across domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Target,
    Auxiliary,
}

impl Domain {
    pub fn label(self) -> &'static str {
        match self {
            Domain::Target => "target",
            Domain::Auxiliary => "auxiliary",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown domain {0:?}, expected \"target\" or \"auxiliary\"")]
pub struct UnknownDomain(pub String);

impl FromStr for Domain {
    type Err = UnknownDomain;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "target" => Ok(Domain::Target),
            "auxiliary" => Ok(Domain::Auxiliary),
            other => Err(UnknownDomain(other.to_string())),
        }
    }
}

/// Opaque user identifier, shared across domains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UserId(Arc<str>);

impl UserId {
    pub fn new(id: impl Into<Arc<str>>) -> Self {
        UserId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UserId {
    fn from(s: &str) -> Self {
        UserId::new(s)
    }
}

impl From<String> for UserId {
    fn from(s: String) -> Self {
        UserId::new(s)
    }
}

/// Item identifier namespaced by domain.
///
/// The raw identifier is whatever the source data used; the domain tag keeps
/// the two catalogs disjoint even when raw identifiers collide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId {
    domain: Domain,
    id: Arc<str>,
}

impl ItemId {
    pub fn new(domain: Domain, id: impl Into<Arc<str>>) -> Self {
        ItemId { domain, id: id.into() }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn raw(&self) -> &str {
        &self.id
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.domain.label(), self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("rating value {value} outside the {RATING_MIN}..={RATING_MAX} scale")]
    ValueOutOfRange { value: u8 },
    #[error("duplicate rating for user {user} and item {item}")]
    DuplicateRating { user: UserId, item: ItemId },
    #[error("rating in domain {found} cannot join a {expected} dataset")]
    DomainMismatch { expected: Domain, found: Domain },
    #[error("statistics population is empty")]
    EmptyPopulation,
}

/// One observed rating. Values are integers on the 1..=5 scale; the domain
/// is carried by the item identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rating {
    user: UserId,
    item: ItemId,
    value: u8,
}

impl Rating {
    pub fn new(user: UserId, item: ItemId, value: u8) -> Result<Self, DataError> {
        if !(RATING_MIN..=RATING_MAX).contains(&value) {
            return Err(DataError::ValueOutOfRange { value });
        }
        Ok(Rating { user, item, value })
    }

    pub fn user(&self) -> &UserId {
        &self.user
    }

    pub fn item(&self) -> &ItemId {
        &self.item
    }

    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn domain(&self) -> Domain {
        self.item.domain()
    }
}

/// An immutable collection of ratings in one domain.
///
/// Each (user, item) pair appears at most once. Ratings are held sorted by
/// (user, item) so iteration order is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    domain: Domain,
    ratings: Vec<Rating>,
    by_user: BTreeMap<UserId, Vec<usize>>,
    items: BTreeSet<ItemId>,
}

impl Dataset {
    pub fn from_ratings(mut ratings: Vec<Rating>, domain: Domain) -> Result<Self, DataError> {
        for r in &ratings {
            if r.domain() != domain {
                return Err(DataError::DomainMismatch { expected: domain, found: r.domain() });
            }
        }
        ratings.sort();
        for pair in ratings.windows(2) {
            if pair[0].user == pair[1].user && pair[0].item == pair[1].item {
                return Err(DataError::DuplicateRating {
                    user: pair[1].user.clone(),
                    item: pair[1].item.clone(),
                });
            }
        }
        let mut by_user: BTreeMap<UserId, Vec<usize>> = BTreeMap::new();
        let mut items = BTreeSet::new();
        for (idx, r) in ratings.iter().enumerate() {
            by_user.entry(r.user.clone()).or_default().push(idx);
            items.insert(r.item.clone());
        }
        Ok(Dataset { domain, ratings, by_user, items })
    }

    pub fn empty(domain: Domain) -> Self {
        Dataset { domain, ratings: Vec::new(), by_user: BTreeMap::new(), items: BTreeSet::new() }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ratings(&self) -> &[Rating] {
        &self.ratings
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn users(&self) -> impl ExactSizeIterator<Item = &UserId> {
        self.by_user.keys()
    }

    pub fn user_set(&self) -> BTreeSet<UserId> {
        self.by_user.keys().cloned().collect()
    }

    pub fn user_count(&self) -> usize {
        self.by_user.len()
    }

    pub fn items(&self) -> &BTreeSet<ItemId> {
        &self.items
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn contains_user(&self, user: &UserId) -> bool {
        self.by_user.contains_key(user)
    }

    pub fn ratings_of(&self, user: &UserId) -> impl Iterator<Item = &Rating> {
        self.by_user
            .get(user)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&idx| &self.ratings[idx])
    }

    /// Fraction of the user x item grid that is observed. Zero for a dataset
    /// with no ratings.
    pub fn density(&self) -> f64 {
        let cells = self.user_count() * self.item_count();
        if cells == 0 {
            0.0
        } else {
            self.ratings.len() as f64 / cells as f64
        }
    }
}

/// Per-item rating-frequency statistics over a fixed user population.
///
/// The histogram counts how many population users gave each value 1..=5;
/// users outside the population are ignored. Because a user rates an item at
/// most once, every item's total count is at most the population size.
#[derive(Clone, Debug, PartialEq)]
pub struct RatingStats {
    population: usize,
    per_item: BTreeMap<ItemId, [u32; 5]>,
}

impl RatingStats {
    pub fn from_dataset(dataset: &Dataset, population: &BTreeSet<UserId>) -> Result<Self, DataError> {
        if population.is_empty() {
            return Err(DataError::EmptyPopulation);
        }
        let mut per_item: BTreeMap<ItemId, [u32; 5]> =
            dataset.items().iter().map(|i| (i.clone(), [0u32; 5])).collect();
        for r in dataset.ratings() {
            if population.contains(r.user()) {
                let hist = per_item.get_mut(r.item()).expect("item indexed at construction");
                hist[(r.value() - RATING_MIN) as usize] += 1;
            }
        }
        Ok(RatingStats { population: population.len(), per_item })
    }

    pub fn population(&self) -> usize {
        self.population
    }

    /// Histogram over values 1..=5; all zeros for an item never seen.
    pub fn histogram(&self, item: &ItemId) -> [u32; 5] {
        self.per_item.get(item).copied().unwrap_or([0; 5])
    }

    /// Number of population users who rated the item.
    pub fn count(&self, item: &ItemId) -> u32 {
        self.histogram(item).iter().sum()
    }

    pub fn items(&self) -> impl Iterator<Item = &ItemId> {
        self.per_item.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn user(id: &str) -> UserId {
        UserId::new(id)
    }

    fn titem(id: &str) -> ItemId {
        ItemId::new(Domain::Target, id)
    }

    fn rating(u: &str, i: &str, v: u8) -> Rating {
        Rating::new(user(u), titem(i), v).unwrap()
    }

    #[test]
    fn rating_accepts_full_scale() {
        for v in RATING_MIN..=RATING_MAX {
            assert!(Rating::new(user("u"), titem("i"), v).is_ok());
        }
    }

    #[test]
    fn rating_rejects_out_of_scale_values() {
        assert_eq!(
            Rating::new(user("u"), titem("i"), 0),
            Err(DataError::ValueOutOfRange { value: 0 })
        );
        assert_eq!(
            Rating::new(user("u"), titem("i"), 6),
            Err(DataError::ValueOutOfRange { value: 6 })
        );
    }

    #[test]
    fn same_raw_id_differs_across_domains() {
        let t = ItemId::new(Domain::Target, "i1");
        let a = ItemId::new(Domain::Auxiliary, "i1");
        assert_ne!(t, a);
        assert_eq!(t.raw(), a.raw());
        assert_eq!(t.to_string(), "target:i1");
        assert_eq!(a.to_string(), "auxiliary:i1");
    }

    #[test]
    fn dataset_rejects_duplicate_user_item_pair() {
        let rs = vec![rating("u1", "i1", 5), rating("u1", "i1", 3)];
        let err = Dataset::from_ratings(rs, Domain::Target).unwrap_err();
        assert_eq!(
            err,
            DataError::DuplicateRating { user: user("u1"), item: titem("i1") }
        );
    }

    #[test]
    fn dataset_rejects_foreign_domain() {
        let aux = Rating::new(user("u1"), ItemId::new(Domain::Auxiliary, "i1"), 3).unwrap();
        let err = Dataset::from_ratings(vec![aux], Domain::Target).unwrap_err();
        assert_eq!(
            err,
            DataError::DomainMismatch { expected: Domain::Target, found: Domain::Auxiliary }
        );
    }

    #[test]
    fn dataset_sorts_by_user_then_item() {
        let rs = vec![rating("u2", "i1", 3), rating("u1", "i2", 4), rating("u1", "i1", 5)];
        let ds = Dataset::from_ratings(rs, Domain::Target).unwrap();
        let order: Vec<_> = ds
            .ratings()
            .iter()
            .map(|r| (r.user().as_str().to_string(), r.item().raw().to_string()))
            .collect();
        assert_eq!(
            order,
            vec![
                ("u1".into(), "i1".into()),
                ("u1".into(), "i2".into()),
                ("u2".into(), "i1".into())
            ]
        );
    }

    #[test]
    fn density_counts_observed_cells() {
        // 2 users x 2 items, 3 ratings observed.
        let rs = vec![rating("u1", "i1", 5), rating("u1", "i2", 4), rating("u2", "i1", 3)];
        let ds = Dataset::from_ratings(rs, Domain::Target).unwrap();
        assert_eq!(ds.density(), 0.75);
    }

    #[test]
    fn density_of_empty_dataset_is_zero() {
        assert_eq!(Dataset::empty(Domain::Target).density(), 0.0);
    }

    #[test]
    fn ratings_of_returns_only_that_users_rows() {
        let rs = vec![rating("u1", "i1", 5), rating("u2", "i1", 3), rating("u1", "i2", 4)];
        let ds = Dataset::from_ratings(rs, Domain::Target).unwrap();
        let of_u1: Vec<_> = ds.ratings_of(&user("u1")).map(|r| r.item().raw().to_string()).collect();
        assert_eq!(of_u1, vec!["i1", "i2"]);
        assert_eq!(ds.ratings_of(&user("u3")).count(), 0);
    }

    #[test]
    fn stats_histogram_counts_population_ratings() {
        // i1 rated 4, 4, 5; i2 never rated by anyone in the population.
        let rs = vec![
            rating("u1", "i1", 4),
            rating("u2", "i1", 4),
            rating("u3", "i1", 5),
            rating("u4", "i2", 2),
        ];
        let ds = Dataset::from_ratings(rs, Domain::Target).unwrap();
        let population: BTreeSet<UserId> = ["u1", "u2", "u3"].iter().map(|s| user(s)).collect();
        let stats = RatingStats::from_dataset(&ds, &population).unwrap();
        assert_eq!(stats.population(), 3);
        assert_eq!(stats.histogram(&titem("i1")), [0, 0, 0, 2, 1]);
        assert_eq!(stats.count(&titem("i1")), 3);
        assert_eq!(stats.histogram(&titem("i2")), [0, 0, 0, 0, 0]);
        assert_eq!(stats.count(&titem("i2")), 0);
        assert_eq!(stats.count(&titem("never-seen")), 0);
    }

    #[test]
    fn stats_require_nonempty_population() {
        let ds = Dataset::from_ratings(vec![rating("u1", "i1", 4)], Domain::Target).unwrap();
        let err = RatingStats::from_dataset(&ds, &BTreeSet::new()).unwrap_err();
        assert_eq!(err, DataError::EmptyPopulation);
    }

    #[test]
    fn domain_labels_round_trip() {
        for d in [Domain::Target, Domain::Auxiliary] {
            assert_eq!(d.label().parse::<Domain>().unwrap(), d);
        }
        assert!("movies".parse::<Domain>().is_err());
    }
}
