//! Loading, converting, and filtering rating data.
//!
//! The native interchange format is CSV with header
//! `user_id,item_id,rating,domain`. Raw review dumps in the multi-line
//! key:value block format (`product/productId`, `review/userId`,
//! `review/score`, blocks separated by blank lines) can be converted to it.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::data::{Dataset, Domain, ItemId, Rating, UserId, RATING_MAX, RATING_MIN};

/// Overlap filter default: a user must have this many ratings in each
/// domain to survive.
pub const DEFAULT_MIN_PER_DOMAIN: usize = 20;

pub const CSV_HEADER: [&str; 4] = ["user_id", "item_id", "rating", "domain"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    MissingFile { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("line {line}: rating {value:?} is not an integer in {RATING_MIN}..={RATING_MAX}")]
    ValueOutOfRange { line: u64, value: String },
    #[error("line {line}: review block is missing required fields")]
    TruncatedBlock { line: u64 },
    #[error("line {line}: review score {text:?} is not an integer rating in {RATING_MIN}..={RATING_MAX}")]
    UnparsableScore { line: u64, text: String },
    #[error("no users satisfy the filter")]
    EmptyResult,
    #[error("cannot write {path}: {source}")]
    WriteFailed { path: PathBuf, source: io::Error },
}

/// Parse a rating column entry: a real that must be integral and on scale.
fn parse_rating_value(text: &str, line: u64) -> Result<u8, IngestError> {
    let trimmed = text.trim();
    let value: f64 = trimmed.parse().map_err(|_| IngestError::MalformedRow {
        line,
        message: format!("unparsable rating {trimmed:?}"),
    })?;
    if value.fract() != 0.0
        || value < f64::from(RATING_MIN)
        || value > f64::from(RATING_MAX)
    {
        return Err(IngestError::ValueOutOfRange { line, value: trimmed.to_string() });
    }
    Ok(value as u8)
}

pub fn load_csv(path: &Path) -> Result<Vec<Rating>, IngestError> {
    let file = File::open(path)
        .map_err(|source| IngestError::MissingFile { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(BufReader::new(file));

    let csv_line = |err: &csv::Error| err.position().map(|p| p.line()).unwrap_or(0);
    let headers = reader
        .headers()
        .map_err(|e| IngestError::MalformedRow { line: csv_line(&e), message: e.to_string() })?;
    if headers != CSV_HEADER.as_slice() {
        return Err(IngestError::MalformedRow {
            line: 1,
            message: format!("expected header {}, found {headers:?}", CSV_HEADER.join(",")),
        });
    }

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record
            .map_err(|e| IngestError::MalformedRow { line: csv_line(&e), message: e.to_string() })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 4 {
            return Err(IngestError::MalformedRow {
                line,
                message: format!("expected 4 fields, found {}", record.len()),
            });
        }
        let (user, item, value, domain) = (&record[0], &record[1], &record[2], &record[3]);
        if user.is_empty() || item.is_empty() {
            return Err(IngestError::MalformedRow {
                line,
                message: "empty user_id or item_id".to_string(),
            });
        }
        let value = parse_rating_value(value, line)?;
        let domain: Domain = domain
            .trim()
            .parse()
            .map_err(|e| IngestError::MalformedRow { line, message: format!("{e}") })?;
        let rating = Rating::new(UserId::new(user), ItemId::new(domain, item), value)
            .expect("value validated on scale");
        out.push(rating);
    }
    Ok(out)
}

pub fn write_csv(path: &Path, ratings: &[Rating]) -> Result<(), IngestError> {
    let fail = |source: io::Error| IngestError::WriteFailed { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(fail)?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(CSV_HEADER).map_err(|e| fail(io::Error::other(e)))?;
    for r in ratings {
        writer
            .write_record([r.user().as_str(), r.item().raw(), &r.value().to_string(), r.domain().label()])
            .map_err(|e| fail(io::Error::other(e)))?;
    }
    writer.flush().map_err(fail)
}

#[derive(Default)]
struct ReviewBlock {
    start_line: u64,
    product: Option<String>,
    user: Option<String>,
    score: Option<(String, u64)>,
}

impl ReviewBlock {
    fn is_empty(&self) -> bool {
        self.start_line == 0
    }

    fn finish(self, domain: Domain) -> Result<Option<Rating>, IngestError> {
        if self.is_empty() {
            return Ok(None);
        }
        let (Some(product), Some(user), Some((score_text, score_line))) =
            (self.product, self.user, self.score)
        else {
            return Err(IngestError::TruncatedBlock { line: self.start_line });
        };
        let unparsable = || IngestError::UnparsableScore {
            line: score_line,
            text: score_text.clone(),
        };
        let score: f64 = score_text.parse().map_err(|_| unparsable())?;
        if score.fract() != 0.0 || score < f64::from(RATING_MIN) || score > f64::from(RATING_MAX) {
            return Err(unparsable());
        }
        let rating = Rating::new(UserId::new(user), ItemId::new(domain, product), score as u8)
            .expect("score validated on scale");
        Ok(Some(rating))
    }
}

/// Convert a raw review dump into ratings for one domain.
///
/// A block must carry all of `product/productId`, `review/userId`, and
/// `review/score`; other keys are ignored. When the same (user, item) pair
/// reviews twice, the last occurrence wins and the collision is logged.
pub fn convert_snap(path: &Path, domain: Domain) -> Result<Vec<Rating>, IngestError> {
    let file = File::open(path)
        .map_err(|source| IngestError::MissingFile { path: path.to_path_buf(), source })?;
    let reader = BufReader::new(file);

    let mut out: Vec<Rating> = Vec::new();
    let mut seen: HashMap<(UserId, ItemId), usize> = HashMap::new();
    let mut duplicates = 0usize;
    let mut block = ReviewBlock::default();

    let mut absorb = |block: ReviewBlock| -> Result<(), IngestError> {
        if let Some(rating) = block.finish(domain)? {
            let key = (rating.user().clone(), rating.item().clone());
            match seen.get(&key) {
                Some(&idx) => {
                    log::debug!(
                        "duplicate review for user {} item {}, keeping the later score",
                        rating.user(),
                        rating.item()
                    );
                    out[idx] = rating;
                    duplicates += 1;
                }
                None => {
                    seen.insert(key, out.len());
                    out.push(rating);
                }
            }
        }
        Ok(())
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line =
            line.map_err(|source| IngestError::MissingFile { path: path.to_path_buf(), source })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            absorb(std::mem::take(&mut block))?;
            continue;
        }
        if block.is_empty() {
            block.start_line = line_no;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "product/productId" => block.product = Some(value.to_string()),
            "review/userId" => block.user = Some(value.to_string()),
            "review/score" => block.score = Some((value.to_string(), line_no)),
            _ => {}
        }
    }
    absorb(block)?;

    if duplicates > 0 {
        log::warn!("{duplicates} duplicate (user, item) reviews collapsed, last occurrence kept");
    }
    Ok(out)
}

/// Keep only users present in both domains with at least `min_per_domain`
/// ratings in each, restricting both datasets to those users. Items left
/// without ratings drop out of the rebuilt indices.
pub fn filter_overlap(
    target: &Dataset,
    auxiliary: &Dataset,
    min_per_domain: usize,
) -> Result<(Dataset, Dataset), IngestError> {
    let qualifying: Vec<&UserId> = target
        .users()
        .filter(|u| {
            target.ratings_of(u).count() >= min_per_domain
                && auxiliary.ratings_of(u).count() >= min_per_domain
        })
        .collect();
    if qualifying.is_empty() {
        return Err(IngestError::EmptyResult);
    }
    let keep: std::collections::BTreeSet<&UserId> = qualifying.into_iter().collect();
    let restrict = |ds: &Dataset| {
        let ratings: Vec<Rating> =
            ds.ratings().iter().filter(|r| keep.contains(r.user())).cloned().collect();
        Dataset::from_ratings(ratings, ds.domain()).expect("subset of a valid dataset")
    };
    Ok((restrict(target), restrict(auxiliary)))
}

/// Keep only users with at least `min_ratings` ratings. Used for
/// single-domain runs, where the overlap filter does not apply but users
/// still need enough ratings to be splittable.
pub fn filter_min_ratings(dataset: &Dataset, min_ratings: usize) -> Result<Dataset, IngestError> {
    let keep: std::collections::BTreeSet<&UserId> = dataset
        .users()
        .filter(|u| dataset.ratings_of(u).count() >= min_ratings)
        .collect();
    if keep.is_empty() {
        return Err(IngestError::EmptyResult);
    }
    let ratings: Vec<Rating> =
        dataset.ratings().iter().filter(|r| keep.contains(r.user())).cloned().collect();
    Ok(Dataset::from_ratings(ratings, dataset.domain()).expect("subset of a valid dataset"))
}
