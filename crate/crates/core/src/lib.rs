//! Readability scoring and grade-band classification for English text.
//!
//! The crate computes seven classic readability formulas plus the Automated
//! Readability Index from one shared statistics pass, fuses the seven into
//! one of six school grade bands by group voting, and uses that classifier
//! to partition question-answer corpora into grade-banded fine-tuning sets.
//! An evaluation layer measures target-band success, rank agreement with
//! human surveys, corpus diversity, and perplexity.
//!
//! ```
//! use gradeband::{integrate, score_all, BandMappingConfig, WordLists};
//!
//! let lists = WordLists::bundled();
//! let config = BandMappingConfig::default();
//! let report = score_all("The cat sat on the mat.", &lists, &config).unwrap();
//! let outcome = integrate(&report).unwrap();
//! assert_eq!(outcome.final_band.index(), 1);
//! ```

pub mod band;
pub mod corpus;
pub mod embed;
pub mod eval;
pub mod integrate;
pub mod lists;
pub mod metrics;
pub mod provider;
pub mod synth;
pub mod text;

pub use band::{BandError, GradeBand};
pub use corpus::{
    classify_record, classify_records, partition_corpus, ClassifiedRecord, CorpusError,
    CorpusRecord, DistributionSummary,
};
pub use eval::{evaluate, evaluate_records, EvalError, EvalItem, EvalReport};
pub use integrate::{integrate, DecisionRule, IntegrateError, IntegrationResult, MetricGroup};
pub use lists::{ListError, WordLists};
pub use metrics::{
    map_to_band, score_all, BandMappingConfig, MetricError, MetricId, MetricReport, MetricScore,
};
pub use provider::{MockProvider, ProviderError, RetryPolicy, TextProvider};
pub use text::{compute_text_stats, count_syllables, segment_sentences, tokenize_words, TextError,
    TextStats};
