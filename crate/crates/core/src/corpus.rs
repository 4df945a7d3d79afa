//! Question-answer corpus handling: JSON Lines I/O, classification,
//! grade-band partitioning, fine-tuning exports, and prompt-driven answer
//! generation.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::GradeBand;
use crate::integrate::{integrate, DecisionRule, IntegrateError};
use crate::lists::WordLists;
use crate::metrics::{score_all, BandMappingConfig, MetricError, MetricId};
use crate::provider::{ProviderError, TextProvider};
use crate::text::TextError;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: missing or invalid field {field:?}")]
    MissingField {
        path: String,
        line: usize,
        field: &'static str,
    },
    #[error("record {id:?}: answer has no word tokens")]
    EmptyAnswer { id: String },
    #[error("question is empty")]
    EmptyQuestion,
    #[error("unknown fine-tune format {0:?}; expected \"chat\"")]
    UnknownFormat(String),
    #[error("failed to {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad taxonomy: {0}")]
    BadTaxonomy(String),
    #[error(transparent)]
    Metric(MetricError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// One question-answer record as read from input JSON Lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub question: String,
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_band: Option<GradeBand>,
}

/// A record plus everything the classifier decided about its answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedRecord {
    #[serde(flatten)]
    pub record: CorpusRecord,
    pub band: GradeBand,
    pub decided_by: DecisionRule,
    /// Raw scores of the seven voting metrics, keyed by metric name.
    pub scores: BTreeMap<MetricId, f64>,
    pub group_votes: [GradeBand; 3],
    /// Raw score of the held-out index, kept for evaluation.
    pub ari: f64,
    pub ari_band: GradeBand,
}

/// Streaming reader over a JSON Lines corpus; yields one result per
/// non-blank line with the line number attached to every failure.
pub struct RecordReader {
    lines: Lines<BufReader<File>>,
    path: String,
    line_no: usize,
}

impl RecordReader {
    pub fn open(path: &Path) -> Result<Self, CorpusError> {
        let file = File::open(path).map_err(|source| CorpusError::Io {
            action: "open",
            path: path.display().to_string(),
            source,
        })?;
        Ok(RecordReader {
            lines: BufReader::new(file).lines(),
            path: path.display().to_string(),
            line_no: 0,
        })
    }
}

impl Iterator for RecordReader {
    type Item = Result<CorpusRecord, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(source) => {
                    self.line_no += 1;
                    return Some(Err(CorpusError::Io {
                        action: "read",
                        path: self.path.clone(),
                        source,
                    }));
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some(parse_record(&line, &self.path, self.line_no));
        }
    }
}

fn parse_record(line: &str, path: &str, line_no: usize) -> Result<CorpusRecord, CorpusError> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| CorpusError::Parse {
            path: path.to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
    for field in ["id", "question", "answer"] {
        let ok = value
            .get(field)
            .and_then(|v| v.as_str())
            .is_some_and(|s| !s.is_empty());
        if !ok {
            return Err(CorpusError::MissingField {
                path: path.to_string(),
                line: line_no,
                field,
            });
        }
    }
    serde_json::from_value(value).map_err(|e| CorpusError::Parse {
        path: path.to_string(),
        line: line_no,
        message: e.to_string(),
    })
}

/// Reads a whole corpus. In strict mode the first bad line fails the load;
/// in lenient mode bad lines are collected and skipped.
pub fn read_records(
    path: &Path,
    lenient: bool,
) -> Result<(Vec<CorpusRecord>, Vec<CorpusError>), CorpusError> {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for item in RecordReader::open(path)? {
        match item {
            Ok(record) => records.push(record),
            Err(err) if lenient => failures.push(err),
            Err(err) => return Err(err),
        }
    }
    Ok((records, failures))
}

/// Classifies one record's answer text.
pub fn classify_record(
    record: CorpusRecord,
    lists: &WordLists,
    config: &BandMappingConfig,
) -> Result<ClassifiedRecord, CorpusError> {
    let report = match score_all(&record.answer, lists, config) {
        Ok(report) => report,
        Err(MetricError::Text(TextError::EmptyText)) => {
            return Err(CorpusError::EmptyAnswer { id: record.id })
        }
        Err(other) => return Err(CorpusError::Metric(other)),
    };
    let outcome = integrate(&report)?;
    let mut scores = BTreeMap::new();
    for metric in MetricId::INTEGRATED {
        scores.insert(metric, report.raw(metric).expect("all metrics scored"));
    }
    let ari = report.raw(MetricId::Ari).expect("ari scored");
    let ari_band = report.band(MetricId::Ari).expect("ari banded");
    Ok(ClassifiedRecord {
        record,
        band: outcome.final_band,
        decided_by: outcome.decided_by,
        scores,
        group_votes: outcome.group_votes,
        ari,
        ari_band,
    })
}

fn thread_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

/// Classifies records in parallel, preserving input order exactly.
///
/// `jobs` is the worker count; zero means one worker per available core.
/// The first failure aborts the batch.
pub fn classify_records(
    records: Vec<CorpusRecord>,
    lists: &WordLists,
    config: &BandMappingConfig,
    jobs: usize,
) -> Result<Vec<ClassifiedRecord>, CorpusError> {
    use rayon::prelude::*;
    thread_pool(jobs).install(|| {
        records
            .into_par_iter()
            .map(|record| classify_record(record, lists, config))
            .collect()
    })
}

/// Lenient variant of [`classify_records`]: failures are collected and the
/// surviving records keep their input order.
pub fn classify_records_lenient(
    records: Vec<CorpusRecord>,
    lists: &WordLists,
    config: &BandMappingConfig,
    jobs: usize,
) -> (Vec<ClassifiedRecord>, Vec<CorpusError>) {
    use rayon::prelude::*;
    let results: Vec<Result<ClassifiedRecord, CorpusError>> = thread_pool(jobs).install(|| {
        records
            .into_par_iter()
            .map(|record| classify_record(record, lists, config))
            .collect()
    });
    let mut classified = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(record) => classified.push(record),
            Err(err) => failures.push(err),
        }
    }
    (classified, failures)
}

/// How many records landed in each band.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionSummary {
    /// Record counts indexed by band (slot 0 is band 1).
    pub counts: [usize; 6],
    pub total: usize,
}

impl DistributionSummary {
    pub fn tally(records: &[ClassifiedRecord]) -> Self {
        let mut counts = [0usize; 6];
        for record in records {
            counts[(record.band.index() - 1) as usize] += 1;
        }
        DistributionSummary {
            counts,
            total: records.len(),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CorpusError> {
    let file = File::create(path).map_err(|source| CorpusError::Io {
        action: "create",
        path: path.display().to_string(),
        source,
    })?;
    Ok(BufWriter::new(file))
}

fn write_jsonl<T: Serialize>(
    writer: &mut BufWriter<File>,
    path: &Path,
    value: &T,
) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        action: "write",
        path: path.display().to_string(),
        source,
    };
    let line = serde_json::to_string(value).map_err(|e| CorpusError::Parse {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    writer.write_all(line.as_bytes()).map_err(io_err)?;
    writer.write_all(b"\n").map_err(io_err)
}

/// File name of one band's partition slice.
pub fn band_file_name(band: GradeBand) -> String {
    format!("band_{}.jsonl", band.index())
}

/// Splits classified records into six per-band JSON Lines files (one per
/// band, empty files included) under `out_dir`, preserving input order
/// within each file.
pub fn partition_corpus(
    records: &[ClassifiedRecord],
    out_dir: &Path,
) -> Result<DistributionSummary, CorpusError> {
    fs::create_dir_all(out_dir).map_err(|source| CorpusError::Io {
        action: "create",
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut writers = Vec::with_capacity(6);
    for band in GradeBand::ALL {
        let path = out_dir.join(band_file_name(band));
        writers.push((create(&path)?, path));
    }
    for record in records {
        let (writer, path) = &mut writers[(record.band.index() - 1) as usize];
        write_jsonl(writer, path, record)?;
    }
    for (writer, path) in &mut writers {
        writer.flush().map_err(|source| CorpusError::Io {
            action: "write",
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(DistributionSummary::tally(records))
}

/// Supported fine-tuning file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinetuneFormat {
    /// One JSON object per line holding a two-turn `messages` array.
    Chat,
}

impl std::str::FromStr for FinetuneFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chat" => Ok(FinetuneFormat::Chat),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatExample {
    pub messages: Vec<ChatMessage>,
}

impl ChatExample {
    pub fn from_record(record: &CorpusRecord) -> Self {
        ChatExample {
            messages: vec![
                ChatMessage {
                    role: "user".to_string(),
                    content: record.question.clone(),
                },
                ChatMessage {
                    role: "assistant".to_string(),
                    content: record.answer.clone(),
                },
            ],
        }
    }
}

/// Converts a band partition into per-band fine-tuning files.
///
/// Reads `band_N.jsonl` for every band from `partition_dir` and writes
/// `finetune_band_N.jsonl` next to them in `out_dir`, one training example
/// per record in file order. Returns per-band example counts.
pub fn emit_finetune_files(
    partition_dir: &Path,
    format: FinetuneFormat,
    out_dir: &Path,
) -> Result<[usize; 6], CorpusError> {
    let FinetuneFormat::Chat = format;
    fs::create_dir_all(out_dir).map_err(|source| CorpusError::Io {
        action: "create",
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut counts = [0usize; 6];
    for band in GradeBand::ALL {
        let in_path = partition_dir.join(band_file_name(band));
        let out_path = out_dir.join(format!("finetune_band_{}.jsonl", band.index()));
        let mut writer = create(&out_path)?;
        let file = File::open(&in_path).map_err(|source| CorpusError::Io {
            action: "open",
            path: in_path.display().to_string(),
            source,
        })?;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| CorpusError::Io {
                action: "read",
                path: in_path.display().to_string(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let record: ClassifiedRecord =
                serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
                    path: in_path.display().to_string(),
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            write_jsonl(&mut writer, &out_path, &ChatExample::from_record(&record.record))?;
            counts[(band.index() - 1) as usize] += 1;
        }
        writer.flush().map_err(|source| CorpusError::Io {
            action: "write",
            path: out_path.display().to_string(),
            source,
        })?;
    }
    Ok(counts)
}

/// The six audience phrases used in generation prompts, one per band.
pub const GRADE_LABELS: [&str; 6] = [
    "elementary school 1st grade",
    "elementary school 3rd grade",
    "elementary school 5th grade",
    "middle school 7th grade",
    "high school 10th grade",
    "college",
];

/// The nine sentence-length caps used in generation prompts.
pub const SENTENCE_WORD_CAPS: [u8; 9] = [4, 5, 6, 7, 8, 10, 12, 15, 20];

/// The vocabulary-difficulty phrase paired with each band.
pub fn difficulty_phrase(band: GradeBand) -> &'static str {
    match band.index() {
        1 | 2 => "very easy",
        3 | 4 => "fairly easy",
        _ => "fairly difficult",
    }
}

/// One fully rendered generation prompt: a question plus the audience and
/// sentence-length instructions for a single (band, cap) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationPrompt {
    pub question: String,
    pub target_band: GradeBand,
    pub grade_label: String,
    pub difficulty_phrase: String,
    pub max_words_per_sentence: u8,
    pub rendered_text: String,
}

/// Expands a question into the full 54-prompt grid (six grade labels by
/// nine sentence caps), in band-major order.
pub fn expand_prompts(question: &str) -> Result<Vec<GenerationPrompt>, CorpusError> {
    let question = question.trim();
    if question.is_empty() {
        return Err(CorpusError::EmptyQuestion);
    }
    let mut prompts = Vec::with_capacity(GRADE_LABELS.len() * SENTENCE_WORD_CAPS.len());
    for (slot, label) in GRADE_LABELS.iter().enumerate() {
        let band = GradeBand::new(slot as u8 + 1).expect("six labels");
        let difficulty = difficulty_phrase(band);
        for cap in SENTENCE_WORD_CAPS {
            let rendered = format!(
                "{question}\n\nPlease provide the explanation in plain text with no bullet \
                 points using {difficulty} words that {label} students will know. Answer in \
                 detail with at a maximum of {cap} words per sentence."
            );
            prompts.push(GenerationPrompt {
                question: question.to_string(),
                target_band: band,
                grade_label: label.to_string(),
                difficulty_phrase: difficulty.to_string(),
                max_words_per_sentence: cap,
                rendered_text: rendered,
            });
        }
    }
    Ok(prompts)
}

/// A prompt that failed after retries; the batch carries on without it.
#[derive(Debug)]
pub struct GenerationFailure {
    pub index: usize,
    pub target_band: GradeBand,
    pub max_words_per_sentence: u8,
    pub error: ProviderError,
}

/// What a generation run produced: one record per successful prompt plus
/// the failures that were skipped.
#[derive(Debug, Default)]
pub struct GenerationOutcome {
    pub records: Vec<CorpusRecord>,
    pub failures: Vec<GenerationFailure>,
}

/// Runs every prompt through the provider, emitting one record per success.
///
/// Record ids are `{question_id}-b{band}-w{cap}` so a batch stays traceable
/// to its prompt cell; failures never abort the remaining prompts.
pub fn generate_answers(
    question_id: &str,
    prompts: &[GenerationPrompt],
    provider: &dyn TextProvider,
) -> GenerationOutcome {
    let mut outcome = GenerationOutcome::default();
    for (index, prompt) in prompts.iter().enumerate() {
        match provider.complete(&prompt.rendered_text) {
            Ok(answer) => outcome.records.push(CorpusRecord {
                id: format!(
                    "{question_id}-b{}-w{:02}",
                    prompt.target_band.index(),
                    prompt.max_words_per_sentence
                ),
                question: prompt.question.clone(),
                answer,
                field: None,
                subject: None,
                target_band: Some(prompt.target_band),
            }),
            Err(error) => outcome.failures.push(GenerationFailure {
                index,
                target_band: prompt.target_band,
                max_words_per_sentence: prompt.max_words_per_sentence,
                error,
            }),
        }
    }
    outcome
}

/// A field of study with the subjects questions are drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSubjects {
    pub name: String,
    pub subjects: Vec<String>,
}

/// The field/subject taxonomy that seeds question generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectTaxonomy {
    pub fields: Vec<FieldSubjects>,
}

const SUBJECTS_JSON: &str = include_str!("../data/subjects.json");

impl SubjectTaxonomy {
    /// The taxonomy bundled with the crate: eight fields, 54 subjects.
    pub fn bundled() -> Self {
        let taxonomy: SubjectTaxonomy =
            serde_json::from_str(SUBJECTS_JSON).expect("bundled taxonomy parses");
        taxonomy.validate().expect("bundled taxonomy is valid");
        taxonomy
    }

    pub fn from_path(path: &Path) -> Result<Self, CorpusError> {
        let raw = fs::read_to_string(path).map_err(|source| CorpusError::Io {
            action: "read",
            path: path.display().to_string(),
            source,
        })?;
        let taxonomy: SubjectTaxonomy =
            serde_json::from_str(&raw).map_err(|e| CorpusError::BadTaxonomy(e.to_string()))?;
        taxonomy.validate()?;
        Ok(taxonomy)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.fields.is_empty() {
            return Err(CorpusError::BadTaxonomy("no fields".to_string()));
        }
        let mut seen = std::collections::HashSet::new();
        for field in &self.fields {
            if field.name.trim().is_empty() {
                return Err(CorpusError::BadTaxonomy("unnamed field".to_string()));
            }
            if field.subjects.is_empty() {
                return Err(CorpusError::BadTaxonomy(format!(
                    "field {:?} has no subjects",
                    field.name
                )));
            }
            for subject in &field.subjects {
                if subject.trim().is_empty() {
                    return Err(CorpusError::BadTaxonomy(format!(
                        "field {:?} has a blank subject",
                        field.name
                    )));
                }
                if !seen.insert(subject.to_lowercase()) {
                    return Err(CorpusError::BadTaxonomy(format!(
                        "duplicate subject {subject:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn subject_count(&self) -> usize {
        self.fields.iter().map(|f| f.subjects.len()).sum()
    }

    /// One question-generation prompt per subject, asking for `per_subject`
    /// questions answerable at any grade level.
    pub fn question_prompts(&self, per_subject: usize) -> Vec<SubjectPrompt> {
        let mut prompts = Vec::with_capacity(self.subject_count());
        for field in &self.fields {
            for subject in &field.subjects {
                prompts.push(SubjectPrompt {
                    field: field.name.clone(),
                    subject: subject.clone(),
                    rendered_text: format!(
                        "Generate {per_subject} questions about {subject} that can be answered \
                         for students at every level from elementary school to college. Write \
                         one question per line with no numbering."
                    ),
                });
            }
        }
        prompts
    }
}

/// A rendered question-generation prompt for one subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectPrompt {
    pub field: String,
    pub subject: String,
    pub rendered_text: String,
}
