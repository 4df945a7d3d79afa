//! The readability formulas and the tables mapping raw scores to grade bands.
//!
//! Seven formulas feed the band integrator; the Automated Readability Index
//! is computed alongside them but held out of integration so it can serve as
//! an independent check.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::GradeBand;
use crate::lists::WordLists;
use crate::text::{compute_text_stats, TextError, TextStats};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("invalid stats: {0}")]
    InvalidStats(&'static str),
    #[error("bad band mapping: {0}")]
    BadConfig(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Text(#[from] TextError),
}

/// Identifies one readability metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricId {
    /// Flesch Reading Ease score (higher means easier).
    Fres,
    /// Flesch-Kincaid grade level.
    Fkgl,
    /// Coleman-Liau index.
    Cli,
    /// Linsear Write formula.
    Lw,
    /// Gunning fog index.
    Fog,
    /// Dale-Chall readability score.
    Dc,
    /// Spache readability score.
    Spache,
    /// Automated Readability Index; computed but excluded from integration.
    Ari,
}

impl MetricId {
    /// All metrics, held-out included.
    pub const ALL: [MetricId; 8] = [
        MetricId::Fres,
        MetricId::Fkgl,
        MetricId::Cli,
        MetricId::Lw,
        MetricId::Fog,
        MetricId::Dc,
        MetricId::Spache,
        MetricId::Ari,
    ];

    /// The seven metrics that vote during integration.
    pub const INTEGRATED: [MetricId; 7] = [
        MetricId::Fres,
        MetricId::Fkgl,
        MetricId::Cli,
        MetricId::Lw,
        MetricId::Fog,
        MetricId::Dc,
        MetricId::Spache,
    ];

    pub fn is_held_out(self) -> bool {
        self == MetricId::Ari
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Fres => "fres",
            MetricId::Fkgl => "fkgl",
            MetricId::Cli => "cli",
            MetricId::Lw => "lw",
            MetricId::Fog => "fog",
            MetricId::Dc => "dc",
            MetricId::Spache => "spache",
            MetricId::Ari => "ari",
        }
    }
}

impl std::fmt::Display for MetricId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MetricId {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| MetricError::BadConfig(format!("unknown metric {s:?}")))
    }
}

fn require_counts(stats: &TextStats) -> Result<(f64, f64), MetricError> {
    if stats.word_count == 0 {
        return Err(MetricError::InvalidStats("word count is zero"));
    }
    if stats.sentence_count == 0 {
        return Err(MetricError::InvalidStats("sentence count is zero"));
    }
    Ok((stats.word_count as f64, stats.sentence_count as f64))
}

/// Flesch Reading Ease: `206.835 - 1.015*(W/S) - 84.6*(syllables/W)`.
pub fn flesch_reading_ease(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    Ok(206.835 - 1.015 * (w / s) - 84.6 * (stats.syllable_count as f64 / w))
}

/// Flesch-Kincaid grade level: `0.39*(W/S) + 11.8*(syllables/W) - 15.59`.
pub fn flesch_kincaid_grade(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    Ok(0.39 * (w / s) + 11.8 * (stats.syllable_count as f64 / w) - 15.59)
}

/// Coleman-Liau index: `0.0588*L - 0.296*S - 15.8` where `L` is letters per
/// 100 words and `S` is sentences per 100 words.
pub fn coleman_liau_index(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    let l = 100.0 * stats.letter_count as f64 / w;
    let sc = 100.0 * s / w;
    Ok(0.0588 * l - 0.296 * sc - 15.8)
}

/// Linsear Write: easy words (one or two syllables) score one point, hard
/// words three; the per-sentence point average `i` yields `i/2` when above
/// 20 and `(i-2)/2` otherwise.
pub fn linsear_write(stats: &TextStats) -> Result<f64, MetricError> {
    let (_, s) = require_counts(stats)?;
    let points = (stats.easy_word_count + 3 * stats.hard_word_count) as f64;
    let i = points / s;
    Ok(if i > 20.0 { i / 2.0 } else { (i - 2.0) / 2.0 })
}

/// Gunning fog index: `0.4*((W/S) + 100*(complex/W))`.
pub fn gunning_fog(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    Ok(0.4 * (w / s + 100.0 * stats.complex_word_count as f64 / w))
}

/// Dale-Chall score: `0.1579*p + 0.0496*(W/S)`, plus `3.6365` when the
/// difficult-word percentage `p` strictly exceeds five.
pub fn dale_chall_score(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    let p = stats.dale_chall_difficult_pct;
    let raw = 0.1579 * p + 0.0496 * (w / s);
    Ok(if p > 5.0 { raw + 3.6365 } else { raw })
}

/// Spache score: `0.141*(W/S) + 0.086*U + 0.839` where `U` is the
/// percentage of unique words unfamiliar per the Spache list.
pub fn spache_score(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    Ok(0.141 * (w / s) + 0.086 * stats.spache_unfamiliar_pct + 0.839)
}

/// Automated Readability Index: `4.71*(C/W) + 0.5*(W/S) - 21.43`.
pub fn automated_readability_index(stats: &TextStats) -> Result<f64, MetricError> {
    let (w, s) = require_counts(stats)?;
    Ok(4.71 * (stats.character_count as f64 / w) + 0.5 * (w / s) - 21.43)
}

/// Computes one metric's raw score from shared stats.
pub fn score(metric: MetricId, stats: &TextStats) -> Result<f64, MetricError> {
    match metric {
        MetricId::Fres => flesch_reading_ease(stats),
        MetricId::Fkgl => flesch_kincaid_grade(stats),
        MetricId::Cli => coleman_liau_index(stats),
        MetricId::Lw => linsear_write(stats),
        MetricId::Fog => gunning_fog(stats),
        MetricId::Dc => dale_chall_score(stats),
        MetricId::Spache => spache_score(stats),
        MetricId::Ari => automated_readability_index(stats),
    }
}

/// Whether larger raw scores mean harder (ascending) or easier (descending)
/// text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascending,
    Descending,
}

/// Five cut points dividing a metric's raw scale into the six bands.
///
/// For ascending metrics the cuts must strictly increase; scores at or below
/// (`inclusive`) or strictly below the k-th cut fall in band k+1, and
/// anything past the last cut lands in band six. Descending metrics mirror
/// this: scores at or above the k-th cut fall in band k+1. A non-finite
/// score falls through every comparison into band six.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub direction: Direction,
    pub cuts: [f64; 5],
    #[serde(default = "default_inclusive")]
    pub inclusive: bool,
}

fn default_inclusive() -> bool {
    true
}

impl ThresholdTable {
    fn validate(&self, metric: MetricId) -> Result<(), MetricError> {
        if self.cuts.iter().any(|c| !c.is_finite()) {
            return Err(MetricError::BadConfig(format!(
                "{metric}: cut points must be finite"
            )));
        }
        let ordered = match self.direction {
            Direction::Ascending => self.cuts.windows(2).all(|w| w[0] < w[1]),
            Direction::Descending => self.cuts.windows(2).all(|w| w[0] > w[1]),
        };
        if !ordered {
            return Err(MetricError::BadConfig(format!(
                "{metric}: cut points must be strictly monotone"
            )));
        }
        Ok(())
    }

    fn band_for(&self, raw: f64) -> GradeBand {
        for (k, cut) in self.cuts.iter().enumerate() {
            let below = match (self.direction, self.inclusive) {
                (Direction::Ascending, true) => raw <= *cut,
                (Direction::Ascending, false) => raw < *cut,
                (Direction::Descending, true) => raw >= *cut,
                (Direction::Descending, false) => raw > *cut,
            };
            if below {
                return GradeBand::new(k as u8 + 1).expect("k in 0..5");
            }
        }
        GradeBand::new(6).expect("6 is a band")
    }
}

/// The per-metric threshold tables; defaults ship in code and any subset can
/// be overridden from a TOML file keyed by metric name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandMappingConfig {
    tables: BTreeMap<MetricId, ThresholdTable>,
}

impl Default for BandMappingConfig {
    fn default() -> Self {
        let grade = ThresholdTable {
            direction: Direction::Ascending,
            cuts: [2.5, 4.5, 6.5, 9.5, 12.5],
            inclusive: true,
        };
        let mut tables = BTreeMap::new();
        for metric in [
            MetricId::Fkgl,
            MetricId::Cli,
            MetricId::Lw,
            MetricId::Fog,
            MetricId::Spache,
            MetricId::Ari,
        ] {
            tables.insert(metric, grade.clone());
        }
        tables.insert(
            MetricId::Fres,
            ThresholdTable {
                direction: Direction::Descending,
                cuts: [100.0, 90.0, 80.0, 60.0, 50.0],
                inclusive: true,
            },
        );
        tables.insert(
            MetricId::Dc,
            ThresholdTable {
                direction: Direction::Ascending,
                cuts: [4.0, 5.0, 6.0, 7.5, 9.0],
                inclusive: false,
            },
        );
        BandMappingConfig { tables }
    }
}

impl BandMappingConfig {
    /// Parses overrides from TOML and merges them over the defaults.
    pub fn from_toml_str(raw: &str) -> Result<Self, MetricError> {
        let overrides: BTreeMap<String, ThresholdTable> =
            toml::from_str(raw).map_err(|e| MetricError::BadConfig(e.to_string()))?;
        let mut config = BandMappingConfig::default();
        for (name, table) in overrides {
            let metric: MetricId = name.parse()?;
            config.tables.insert(metric, table);
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, MetricError> {
        let raw = std::fs::read_to_string(path).map_err(|source| MetricError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&raw)
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        for (metric, table) in &self.tables {
            table.validate(*metric)?;
        }
        Ok(())
    }

    pub fn table(&self, metric: MetricId) -> &ThresholdTable {
        &self.tables[&metric]
    }
}

/// Maps a raw metric score onto a grade band via the config's tables.
pub fn map_to_band(
    metric: MetricId,
    raw: f64,
    config: &BandMappingConfig,
) -> Result<GradeBand, MetricError> {
    let table = config.table(metric);
    table.validate(metric)?;
    Ok(table.band_for(raw))
}

/// One metric's raw score and its mapped band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub metric: MetricId,
    pub raw: f64,
    pub band: GradeBand,
}

/// All eight scores for a text plus the stats they were computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub stats: TextStats,
    pub scores: BTreeMap<MetricId, MetricScore>,
}

impl MetricReport {
    pub fn raw(&self, metric: MetricId) -> Option<f64> {
        self.scores.get(&metric).map(|s| s.raw)
    }

    pub fn band(&self, metric: MetricId) -> Option<GradeBand> {
        self.scores.get(&metric).map(|s| s.band)
    }
}

/// Scores a text on all eight metrics from a single stats pass.
pub fn score_all(
    text: &str,
    lists: &WordLists,
    config: &BandMappingConfig,
) -> Result<MetricReport, MetricError> {
    let stats = compute_text_stats(text, lists)?;
    let mut scores = BTreeMap::new();
    for metric in MetricId::ALL {
        let raw = score(metric, &stats)?;
        let band = map_to_band(metric, raw, config)?;
        scores.insert(metric, MetricScore { metric, raw, band });
    }
    Ok(MetricReport { stats, scores })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_stats() -> TextStats {
        compute_text_stats("The cat sat on the mat.", &WordLists::bundled()).unwrap()
    }

    #[test]
    fn formulas_match_hand_computed_values() {
        let stats = fixture_stats();
        let cases = [
            (MetricId::Fres, 116.145),
            (MetricId::Fkgl, -1.45),
            (MetricId::Cli, -4.073_333_333_333_333),
            (MetricId::Lw, 2.0),
            (MetricId::Fog, 2.4),
            (MetricId::Dc, 0.2976),
            (MetricId::Spache, 1.685),
            (MetricId::Ari, -5.085),
        ];
        for (metric, expect) in cases {
            let raw = score(metric, &stats).unwrap();
            assert!(
                (raw - expect).abs() < 1e-6,
                "{metric}: {raw} vs {expect}"
            );
        }
    }

    #[test]
    fn zero_counts_are_rejected() {
        let mut stats = fixture_stats();
        stats.sentence_count = 0;
        assert!(matches!(
            flesch_reading_ease(&stats),
            Err(MetricError::InvalidStats(_))
        ));
        let mut stats = fixture_stats();
        stats.word_count = 0;
        assert!(matches!(gunning_fog(&stats), Err(MetricError::InvalidStats(_))));
    }

    #[test]
    fn dale_chall_adjustment_is_strict() {
        let mut stats = fixture_stats();
        stats.word_count = 10_000;
        stats.sentence_count = 500;
        stats.dale_chall_difficult_count = 500;
        stats.dale_chall_difficult_pct = 100.0 * 500.0 / 10_000.0;
        let at_five = dale_chall_score(&stats).unwrap();
        assert!((at_five - (0.1579 * 5.0 + 0.0496 * 20.0)).abs() < 1e-12);

        stats.dale_chall_difficult_count = 501;
        stats.dale_chall_difficult_pct = 100.0 * 501.0 / 10_000.0;
        let above_five = dale_chall_score(&stats).unwrap();
        assert!(above_five > at_five + 3.6);
    }

    #[test]
    fn linsear_write_branches_at_twenty() {
        let mut stats = fixture_stats();
        stats.sentence_count = 1;
        stats.word_count = 21;
        stats.easy_word_count = 21;
        stats.hard_word_count = 0;
        // i = 21 > 20, so halve without the subtraction
        assert!((linsear_write(&stats).unwrap() - 10.5).abs() < 1e-12);
        stats.word_count = 18;
        stats.easy_word_count = 18;
        assert!((linsear_write(&stats).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn default_mapping_places_boundary_scores() {
        let config = BandMappingConfig::default();
        // ascending grade table: boundaries belong to the lower band
        for (raw, band) in [(2.5, 1), (2.6, 2), (4.5, 2), (6.5, 3), (9.5, 4), (12.5, 5), (12.6, 6)]
        {
            let got = map_to_band(MetricId::Fkgl, raw, &config).unwrap();
            assert_eq!(got.index(), band, "fkgl {raw}");
        }
        // descending reading-ease table: boundaries belong to the easier band
        for (raw, band) in [(100.0, 1), (99.9, 2), (90.0, 2), (80.0, 3), (60.0, 4), (50.0, 5), (49.9, 6)]
        {
            let got = map_to_band(MetricId::Fres, raw, &config).unwrap();
            assert_eq!(got.index(), band, "fres {raw}");
        }
        // dale-chall uses exclusive upper bounds
        for (raw, band) in [(3.9, 1), (4.0, 2), (4.9, 2), (5.0, 3), (7.5, 5), (9.0, 6)] {
            let got = map_to_band(MetricId::Dc, raw, &config).unwrap();
            assert_eq!(got.index(), band, "dc {raw}");
        }
    }

    #[test]
    fn every_float_maps_to_exactly_one_band() {
        let config = BandMappingConfig::default();
        for raw in [-1e9, -12.7, 0.0, 2.5, 5.1, 9.5, 50.0, 1e9, f64::INFINITY, f64::NEG_INFINITY]
        {
            for metric in MetricId::ALL {
                let band = map_to_band(metric, raw, &config).unwrap();
                assert!((1..=6).contains(&band.index()));
            }
        }
    }

    #[test]
    fn toml_overrides_merge_over_defaults() {
        let config = BandMappingConfig::from_toml_str(
            "[fog]\ndirection = \"ascending\"\ncuts = [1.0, 2.0, 3.0, 4.0, 5.0]\n",
        )
        .unwrap();
        assert_eq!(config.table(MetricId::Fog).cuts, [1.0, 2.0, 3.0, 4.0, 5.0]);
        // untouched metrics keep their defaults
        assert_eq!(config.table(MetricId::Fkgl).cuts, [2.5, 4.5, 6.5, 9.5, 12.5]);
    }

    #[test]
    fn bundled_mapping_file_matches_defaults() {
        let config =
            BandMappingConfig::from_toml_str(include_str!("../data/band_mapping.toml")).unwrap();
        assert_eq!(config, BandMappingConfig::default());
    }

    #[test]
    fn bad_configs_are_rejected() {
        let unsorted = "[fog]\ndirection = \"ascending\"\ncuts = [5.0, 2.0, 3.0, 4.0, 1.0]\n";
        assert!(matches!(
            BandMappingConfig::from_toml_str(unsorted),
            Err(MetricError::BadConfig(_))
        ));
        let unknown = "[bogus]\ndirection = \"ascending\"\ncuts = [1.0, 2.0, 3.0, 4.0, 5.0]\n";
        assert!(BandMappingConfig::from_toml_str(unknown).is_err());
    }

    #[test]
    fn score_all_covers_every_metric() {
        let report = score_all(
            "The cat sat on the mat.",
            &WordLists::bundled(),
            &BandMappingConfig::default(),
        )
        .unwrap();
        assert_eq!(report.scores.len(), 8);
        assert_eq!(report.band(MetricId::Fres).unwrap().index(), 1);
        assert_eq!(report.band(MetricId::Ari).unwrap().index(), 1);
    }
}
