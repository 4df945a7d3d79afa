//! Evaluation of classified corpora and model outputs: target-band success,
//! confusion matrices, rank-correlation of human surveys, diversity gain,
//! perplexity, and distribution summaries.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::GradeBand;
use crate::corpus::ClassifiedRecord;
use crate::embed::{euclidean_distance, Embedder};
use crate::lists::WordLists;
use crate::metrics::{map_to_band, BandMappingConfig, MetricError, MetricId};
use crate::provider::ProviderError;
use crate::text::{segment_sentences, tokenize_words, TextError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no data for band {0}")]
    NoData(GradeBand),
    #[error("ranking {0:?} is not a permutation of 1..={1}")]
    NotAPermutation(Vec<usize>, usize),
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("nothing to evaluate")]
    EmptyCorpus,
    #[error("{path}:{line}: {message}")]
    BadInput {
        path: String,
        line: usize,
        message: String,
    },
    #[error("failed to {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// One evaluated record: where it was aimed and where it landed.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalItem {
    pub target: GradeBand,
    pub band: GradeBand,
    pub ari: f64,
    pub scores: BTreeMap<MetricId, f64>,
}

impl EvalItem {
    /// Builds an item from a classified record; records without a target
    /// band cannot be evaluated and yield `None`.
    pub fn from_classified(record: &ClassifiedRecord) -> Option<Self> {
        Some(EvalItem {
            target: record.record.target_band?,
            band: record.band,
            ari: record.ari,
            scores: record.scores.clone(),
        })
    }
}

fn band_slot(band: GradeBand) -> usize {
    (band.index() - 1) as usize
}

/// Percentage of records classified exactly into their target band, per
/// target band; bands with no records yield `None`.
pub fn target_success(items: &[EvalItem]) -> [Option<f64>; 6] {
    let mut hits = [0usize; 6];
    let mut totals = [0usize; 6];
    for item in items {
        let slot = band_slot(item.target);
        totals[slot] += 1;
        if item.band == item.target {
            hits[slot] += 1;
        }
    }
    std::array::from_fn(|slot| {
        (totals[slot] > 0).then(|| 100.0 * hits[slot] as f64 / totals[slot] as f64)
    })
}

/// Confusion counts: rows are target bands, columns classified bands.
pub fn confusion_matrix(items: &[EvalItem]) -> [[u64; 6]; 6] {
    let mut matrix = [[0u64; 6]; 6];
    for item in items {
        matrix[band_slot(item.target)][band_slot(item.band)] += 1;
    }
    matrix
}

/// Row-normalizes a confusion matrix to percentages; nonempty rows sum to
/// 100 and empty rows stay all zero.
pub fn row_normalized(matrix: &[[u64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut out = [[0.0f64; 6]; 6];
    for (row, counts) in matrix.iter().enumerate() {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            continue;
        }
        for (col, count) in counts.iter().enumerate() {
            out[row][col] = 100.0 * *count as f64 / total as f64;
        }
    }
    out
}

/// Renders a confusion matrix as CSV with band headers.
pub fn confusion_csv(matrix: &[[u64; 6]; 6]) -> String {
    let mut out = String::from("target,band_1,band_2,band_3,band_4,band_5,band_6\n");
    for (row, counts) in matrix.iter().enumerate() {
        out.push_str(&format!(
            "band_{},{}\n",
            row + 1,
            counts.map(|c| c.to_string()).join(",")
        ));
    }
    out
}

/// Everything `evaluate` measures about a classified corpus with targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub total: usize,
    /// Exact-hit percentage per target band; `null` where a band is empty.
    pub target_pct: [Option<f64>; 6],
    pub overall_pct: f64,
    pub confusion: [[u64; 6]; 6],
    pub confusion_row_pct: [[f64; 6]; 6],
    /// Mean raw score of the held-out index per target band.
    pub ari_mean: [Option<f64>; 6],
    /// The band that mean held-out score maps to.
    pub ari_level: [Option<GradeBand>; 6],
    /// Mean mapped band per voting metric, per target band.
    pub metric_mean_band: [Option<BTreeMap<MetricId, f64>>; 6],
}

/// Evaluates classified records directly; records without a target band
/// are skipped, since there is nothing to compare them against.
pub fn evaluate_records(
    records: &[ClassifiedRecord],
    config: &BandMappingConfig,
) -> Result<EvalReport, EvalError> {
    let items: Vec<EvalItem> = records.iter().filter_map(EvalItem::from_classified).collect();
    evaluate(&items, config)
}

pub fn evaluate(items: &[EvalItem], config: &BandMappingConfig) -> Result<EvalReport, EvalError> {
    if items.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let confusion = confusion_matrix(items);
    let exact: u64 = (0..6).map(|i| confusion[i][i]).sum();

    let mut ari_sums = [0.0f64; 6];
    let mut metric_band_sums: [BTreeMap<MetricId, f64>; 6] = Default::default();
    let mut totals = [0usize; 6];
    for item in items {
        let slot = band_slot(item.target);
        totals[slot] += 1;
        ari_sums[slot] += item.ari;
        for (metric, raw) in &item.scores {
            let band = map_to_band(*metric, *raw, config)?;
            *metric_band_sums[slot].entry(*metric).or_insert(0.0) += band.index() as f64;
        }
    }

    let mut ari_mean = [None; 6];
    let mut ari_level = [None; 6];
    let mut metric_mean_band: [Option<BTreeMap<MetricId, f64>>; 6] = Default::default();
    for slot in 0..6 {
        if totals[slot] == 0 {
            continue;
        }
        let mean = ari_sums[slot] / totals[slot] as f64;
        ari_mean[slot] = Some(mean);
        ari_level[slot] = Some(map_to_band(MetricId::Ari, mean, config)?);
        let means: BTreeMap<MetricId, f64> = metric_band_sums[slot]
            .iter()
            .map(|(m, sum)| (*m, sum / totals[slot] as f64))
            .collect();
        metric_mean_band[slot] = Some(means);
    }

    Ok(EvalReport {
        total: items.len(),
        target_pct: target_success(items),
        overall_pct: 100.0 * exact as f64 / items.len() as f64,
        confusion,
        confusion_row_pct: row_normalized(&confusion),
        ari_mean,
        ari_level,
        metric_mean_band,
    })
}

/// One rater's ranking of items whose true order is `1..=n`: `ranks[i]` is
/// the rank the rater assigned to the item whose true rank is `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingObservation {
    ranks: Vec<usize>,
}

impl RankingObservation {
    /// Validates that `ranks` is a permutation of `1..=len` with at least
    /// two entries.
    pub fn new(ranks: Vec<usize>) -> Result<Self, EvalError> {
        let n = ranks.len();
        if n < 2 {
            return Err(EvalError::NotAPermutation(ranks, n.max(2)));
        }
        let mut seen = vec![false; n];
        for &rank in &ranks {
            if rank == 0 || rank > n || seen[rank - 1] {
                return Err(EvalError::NotAPermutation(ranks, n));
            }
            seen[rank - 1] = true;
        }
        Ok(RankingObservation { ranks })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    fn concordant_discordant(&self) -> (u64, u64) {
        let mut concordant = 0u64;
        let mut discordant = 0u64;
        for i in 0..self.ranks.len() {
            for j in (i + 1)..self.ranks.len() {
                if self.ranks[i] < self.ranks[j] {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
        (concordant, discordant)
    }
}

/// Kendall rank correlation of an observed ranking against the true order.
///
/// With no ties possible in a permutation this is
/// `(concordant - discordant) / (n*(n-1)/2)`: exactly `1.0` for the
/// identity and `-1.0` for the full reversal.
pub fn kendall_tau(observation: &RankingObservation) -> f64 {
    let (concordant, discordant) = observation.concordant_discordant();
    let pairs = concordant + discordant;
    (concordant as f64 - discordant as f64) / pairs as f64
}

/// Per-position absolute rank displacement: how far each item moved from
/// its true rank.
pub fn l1_rank_distance(observation: &RankingObservation) -> Vec<usize> {
    observation
        .ranks()
        .iter()
        .enumerate()
        .map(|(i, &rank)| rank.abs_diff(i + 1))
        .collect()
}

/// A ranking survey: one complete ranking per rater.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingSurvey {
    pub raters: Vec<(String, RankingObservation)>,
}

#[derive(Debug, Deserialize)]
struct RankingCsvRow {
    rater_id: String,
    position: usize,
    assigned_rank: usize,
}

/// Reads a ranking survey from CSV with columns
/// `rater_id,position,assigned_rank`; every rater must rank all six
/// positions exactly once.
pub fn read_ranking_csv(path: &Path) -> Result<RankingSurvey, EvalError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| EvalError::BadInput {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let mut by_rater: BTreeMap<String, Vec<Option<usize>>> = BTreeMap::new();
    for (idx, row) in reader.deserialize::<RankingCsvRow>().enumerate() {
        let line = idx + 2; // header is line 1
        let row = row.map_err(|e| EvalError::BadInput {
            path: path.display().to_string(),
            line,
            message: e.to_string(),
        })?;
        if row.position == 0 || row.position > 6 {
            return Err(EvalError::BadInput {
                path: path.display().to_string(),
                line,
                message: format!("position {} is outside 1..=6", row.position),
            });
        }
        let slots = by_rater
            .entry(row.rater_id.clone())
            .or_insert_with(|| vec![None; 6]);
        if slots[row.position - 1].replace(row.assigned_rank).is_some() {
            return Err(EvalError::BadInput {
                path: path.display().to_string(),
                line,
                message: format!(
                    "rater {:?} ranked position {} twice",
                    row.rater_id, row.position
                ),
            });
        }
    }
    let mut raters = Vec::with_capacity(by_rater.len());
    for (rater, slots) in by_rater {
        let ranks: Vec<usize> = slots.into_iter().flatten().collect();
        if ranks.len() != 6 {
            return Err(EvalError::BadInput {
                path: path.display().to_string(),
                line: 0,
                message: format!("rater {rater:?} did not rank all six positions"),
            });
        }
        raters.push((rater, RankingObservation::new(ranks)?));
    }
    Ok(RankingSurvey { raters })
}

/// Aggregated ranking-survey results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingSummary {
    pub per_rater_tau: Vec<(String, f64)>,
    /// Mean of the per-rater correlations.
    pub mean_tau: f64,
    /// Correlation over all raters' pairs pooled before dividing; equals
    /// `mean_tau` when every rater ranks the same number of items.
    pub pooled_tau: f64,
    /// Mean absolute rank displacement per true position.
    pub mean_l1_by_position: [f64; 6],
}

pub fn summarize_rankings(survey: &RankingSurvey) -> Result<RankingSummary, EvalError> {
    if survey.raters.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut per_rater_tau = Vec::with_capacity(survey.raters.len());
    let mut pooled_concordant = 0u64;
    let mut pooled_discordant = 0u64;
    let mut l1_sums = [0.0f64; 6];
    for (rater, observation) in &survey.raters {
        per_rater_tau.push((rater.clone(), kendall_tau(observation)));
        let (c, d) = observation.concordant_discordant();
        pooled_concordant += c;
        pooled_discordant += d;
        for (slot, distance) in l1_rank_distance(observation).into_iter().enumerate() {
            l1_sums[slot] += distance as f64;
        }
    }
    let raters = survey.raters.len() as f64;
    let pairs = pooled_concordant + pooled_discordant;
    Ok(RankingSummary {
        mean_tau: per_rater_tau.iter().map(|(_, t)| t).sum::<f64>() / raters,
        pooled_tau: (pooled_concordant as f64 - pooled_discordant as f64) / pairs as f64,
        per_rater_tau,
        mean_l1_by_position: l1_sums.map(|sum| sum / raters),
    })
}

/// One rater's 1-5 quality scores for one band's sample on the three
/// survey questions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingRow {
    pub rater: String,
    pub band: GradeBand,
    pub scores: [u8; 3],
}

#[derive(Debug, Deserialize)]
struct RatingCsvRow {
    rater_id: String,
    band: u8,
    q1: u8,
    q2: u8,
    q3: u8,
}

/// Reads a rating survey from CSV with columns `rater_id,band,q1,q2,q3`;
/// scores must sit in 1..=5.
pub fn read_rating_csv(path: &Path) -> Result<Vec<RatingRow>, EvalError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| EvalError::BadInput {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let mut rows = Vec::new();
    for (idx, row) in reader.deserialize::<RatingCsvRow>().enumerate() {
        let line = idx + 2;
        let bad = |message: String| EvalError::BadInput {
            path: path.display().to_string(),
            line,
            message,
        };
        let row = row.map_err(|e| bad(e.to_string()))?;
        let band = GradeBand::new(row.band)
            .map_err(|e| bad(e.to_string()))?;
        let scores = [row.q1, row.q2, row.q3];
        if scores.iter().any(|s| !(1..=5).contains(s)) {
            return Err(bad(format!("scores {scores:?} are outside 1..=5")));
        }
        rows.push(RatingRow {
            rater: row.rater_id,
            band,
            scores,
        });
    }
    Ok(rows)
}

/// Five-number summary plus mean for one band/question cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxStats {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    // linear interpolation between closest ranks
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl BoxStats {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
        Some(BoxStats {
            count: sorted.len(),
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        })
    }
}

/// Box statistics per band and question; cells without data are `None`.
pub fn rating_box_stats(rows: &[RatingRow]) -> [[Option<BoxStats>; 3]; 6] {
    let mut cells: [[Vec<f64>; 3]; 6] = Default::default();
    for row in rows {
        for (question, score) in row.scores.iter().enumerate() {
            cells[band_slot(row.band)][question].push(*score as f64);
        }
    }
    std::array::from_fn(|slot| std::array::from_fn(|question| BoxStats::of(&cells[slot][question])))
}

/// Mean distance from each new text to its nearest base text, in embedding
/// space. Higher means the new texts cover ground the base corpus misses.
pub fn diversity_gain(
    base: &[String],
    new: &[String],
    embedder: &dyn Embedder,
) -> Result<f64, EvalError> {
    if base.is_empty() || new.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let expected = embedder.dimension();
    let embed = |text: &String| -> Result<Vec<f64>, EvalError> {
        let vector = embedder.embed(text)?;
        if vector.len() != expected {
            return Err(EvalError::DimensionMismatch {
                expected,
                got: vector.len(),
            });
        }
        Ok(vector)
    };
    let base_vectors: Vec<Vec<f64>> = base.iter().map(embed).collect::<Result<_, _>>()?;
    let mut total = 0.0;
    for text in new {
        let vector = embed(text)?;
        let nearest = base_vectors
            .iter()
            .map(|b| euclidean_distance(&vector, b))
            .fold(f64::INFINITY, f64::min);
        total += nearest;
    }
    Ok(total / new.len() as f64)
}

/// Supplies per-token natural-log probabilities for a text.
pub trait LogprobSource {
    fn token_logprobs(&self, text: &str) -> Result<Vec<f64>, ProviderError>;
}

/// Log-probabilities loaded from JSON Lines of
/// `{"text": ..., "logprobs": [...]}`, keyed by exact text.
pub struct PrecomputedLogprobs {
    by_text: HashMap<String, Vec<f64>>,
}

#[derive(Debug, Deserialize)]
struct LogprobLine {
    text: String,
    logprobs: Vec<f64>,
}

impl PrecomputedLogprobs {
    pub fn from_jsonl(path: &Path) -> Result<Self, EvalError> {
        let raw = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
            action: "read",
            path: path.display().to_string(),
            source,
        })?;
        let mut by_text = HashMap::new();
        for (idx, line) in raw.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed: LogprobLine =
                serde_json::from_str(line).map_err(|e| EvalError::BadInput {
                    path: path.display().to_string(),
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            by_text.insert(parsed.text, parsed.logprobs);
        }
        Ok(PrecomputedLogprobs { by_text })
    }
}

impl LogprobSource for PrecomputedLogprobs {
    fn token_logprobs(&self, text: &str) -> Result<Vec<f64>, ProviderError> {
        self.by_text
            .get(text)
            .cloned()
            .ok_or_else(|| ProviderError::Request("no stored log-probabilities for text".into()))
    }
}

/// Corpus perplexity: `exp(-mean(logprob))` over every token of every text.
pub fn perplexity(texts: &[String], source: &dyn LogprobSource) -> Result<f64, EvalError> {
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for text in texts {
        for lp in source.token_logprobs(text)? {
            if !lp.is_finite() || lp > 0.0 {
                return Err(EvalError::Provider(ProviderError::Request(format!(
                    "log-probability {lp} is not a finite non-positive number"
                ))));
            }
            sum += lp;
            count += 1;
        }
    }
    if count == 0 {
        return Err(EvalError::EmptyCorpus);
    }
    Ok((-sum / count as f64).exp())
}

/// Words-per-sentence distribution over a set of texts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceLengthSummary {
    /// Sentence count per exact word length.
    pub histogram: BTreeMap<usize, u64>,
    pub total_sentences: usize,
    pub mean: f64,
    pub median: f64,
}

/// Measures sentence lengths across texts; texts without word tokens are
/// skipped, and the whole set being wordless is an error.
pub fn sentence_length_distribution(
    texts: &[String],
    lists: &WordLists,
) -> Result<SentenceLengthSummary, EvalError> {
    let mut lengths = Vec::new();
    for text in texts {
        match segment_sentences(text, lists) {
            Ok(sentences) => {
                for sentence in sentences {
                    let words = tokenize_words(&sentence).len();
                    if words > 0 {
                        lengths.push(words);
                    }
                }
            }
            Err(TextError::EmptyText) => continue,
            Err(other) => {
                return Err(EvalError::Metric(MetricError::Text(other)));
            }
        }
    }
    if lengths.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    lengths.sort_unstable();
    let total: usize = lengths.iter().sum();
    let n = lengths.len();
    let median = if n % 2 == 1 {
        lengths[n / 2] as f64
    } else {
        (lengths[n / 2 - 1] + lengths[n / 2]) as f64 / 2.0
    };
    let mut histogram = BTreeMap::new();
    for length in &lengths {
        *histogram.entry(*length).or_insert(0u64) += 1;
    }
    Ok(SentenceLengthSummary {
        histogram,
        total_sentences: n,
        mean: total as f64 / n as f64,
        median,
    })
}

/// Word-frequency table over lowercased tokens, most frequent first (ties
/// alphabetical), keeping words seen at least `min_count` times. Also
/// returns the total token count before filtering.
pub fn zipf_table(texts: &[String], min_count: u64) -> (Vec<(String, u64)>, u64) {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut total = 0u64;
    for text in texts {
        for token in tokenize_words(text) {
            *counts.entry(token.to_lowercase()).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut table: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|(_, count)| *count >= min_count)
        .collect();
    table.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    (table, total)
}
