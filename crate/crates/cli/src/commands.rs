//! One function per subcommand. Every function writes machine output to
//! stdout and keeps anything conversational on stderr, so the commands
//! compose in shell pipelines.

use std::collections::HashMap;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use gradeband::corpus::{
    classify_records, classify_records_lenient, emit_finetune_files, expand_prompts,
    generate_answers, partition_corpus, read_records, FinetuneFormat, SubjectTaxonomy,
};
use gradeband::embed::HashedBagEmbedder;
use gradeband::eval::{
    confusion_csv, diversity_gain, rating_box_stats, read_ranking_csv, read_rating_csv,
    summarize_rankings,
};
use gradeband::provider::{Throttled, TokenBucket};
use gradeband::{
    evaluate_records, integrate, score_all, ClassifiedRecord, GradeBand, MetricId, MockProvider,
    RetryPolicy,
};

use crate::config::{CliConfig, ProviderConfig, Resolved};
use crate::http::HttpProvider;
use crate::CliError;

/// A closed stdout (`gradeband ... | head`) is normal shell life, not an
/// error worth reporting.
fn tolerate_pipe(err: std::io::Error) -> Result<(), CliError> {
    if err.kind() == std::io::ErrorKind::BrokenPipe {
        Ok(())
    } else {
        Err(CliError::Io(err.to_string()))
    }
}

fn print_stdout(content: &str) -> Result<(), CliError> {
    match std::io::stdout().lock().write_all(content.as_bytes()) {
        Ok(()) => Ok(()),
        Err(err) => tolerate_pipe(err),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let mut line =
        serde_json::to_string(value).map_err(|e| CliError::Io(format!("serialization: {e}")))?;
    line.push('\n');
    print_stdout(&line)
}

fn write_jsonl<T: serde::Serialize>(items: &[T], output: Option<&Path>) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(std::fs::File::create(path).map_err(
            |e| CliError::Io(format!("cannot create {}: {e}", path.display())),
        )?)),
        None => Box::new(std::io::stdout().lock()),
    };
    for item in items {
        let mut line = serde_json::to_string(item)
            .map_err(|e| CliError::Io(format!("serialization: {e}")))?;
        line.push('\n');
        if let Err(err) = sink.write_all(line.as_bytes()) {
            return tolerate_pipe(err);
        }
    }
    match sink.flush() {
        Ok(()) => Ok(()),
        Err(err) => tolerate_pipe(err),
    }
}

fn read_classified(path: &Path) -> Result<Vec<ClassifiedRecord>, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ClassifiedRecord = serde_json::from_str(line).map_err(|e| {
            CliError::Validation(format!("{}:{}: {e}", path.display(), idx + 1))
        })?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(CliError::Validation(format!(
            "{} holds no classified records",
            path.display()
        )));
    }
    Ok(records)
}

pub fn analyze(
    resolved: &Resolved,
    text: Option<String>,
    file: Option<std::path::PathBuf>,
    json: bool,
) -> Result<(), CliError> {
    let text = match (text, file) {
        (Some(text), _) => text,
        (None, Some(path)) => std::fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| CliError::Io(e.to_string()))?;
            buffer
        }
    };
    let report = score_all(&text, &resolved.lists, &resolved.mapping)?;
    let result = integrate(&report)?;
    if json {
        return print_json(&serde_json::json!({
            "stats": report.stats,
            "scores": report.scores,
            "group_votes": result.group_votes,
            "band": result.final_band,
            "decided_by": result.decided_by,
        }));
    }

    use std::fmt::Write as _;
    let stats = &report.stats;
    let mut table = String::new();
    let _ = writeln!(
        table,
        "sentences {}   words {}   syllables {}   characters {}",
        stats.sentence_count, stats.word_count, stats.syllable_count, stats.character_count
    );
    let _ = writeln!(table, "{:<8} {:>10}  band", "metric", "raw");
    for metric in MetricId::ALL {
        let score = &report.scores[&metric];
        let marker = if metric.is_held_out() { "  (held out)" } else { "" };
        let _ = writeln!(
            table,
            "{:<8} {:>10.3}  {}{marker}",
            metric.name(),
            score.raw,
            score.band
        );
    }
    let [word_list, length, syllable] = result.group_votes;
    let _ = writeln!(
        table,
        "groups   word-list {word_list}  length {length}  syllable {syllable}"
    );
    let (low, high) = result.final_band.grade_range();
    let grades = match high {
        Some(high) => format!("grades {low}-{high}"),
        None => format!("grades {low}+"),
    };
    let _ = writeln!(
        table,
        "band     {} ({}, {grades}) by {} decision",
        result.final_band,
        result.final_band.label(),
        format!("{:?}", result.decided_by).to_lowercase()
    );
    print_stdout(&table)
}

pub fn classify(
    resolved: &Resolved,
    input: &Path,
    output: Option<&Path>,
    lenient: bool,
    jobs: usize,
) -> Result<(), CliError> {
    let (records, read_failures) = read_records(input, lenient)?;
    for failure in &read_failures {
        eprintln!("gradeband: skipped: {failure}");
    }
    let total_in = records.len() + read_failures.len();

    let classified = if lenient {
        let (classified, failures) =
            classify_records_lenient(records, &resolved.lists, &resolved.mapping, jobs);
        for failure in &failures {
            eprintln!("gradeband: skipped: {failure}");
        }
        classified
    } else {
        classify_records(records, &resolved.lists, &resolved.mapping, jobs)?
    };

    write_jsonl(&classified, output)?;

    let summary = gradeband::DistributionSummary::tally(&classified);
    eprintln!(
        "classified {} of {total_in} records; per band: {}",
        summary.total,
        summary
            .counts
            .iter()
            .enumerate()
            .map(|(i, n)| format!("{}:{n}", i + 1))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(())
}

pub fn partition(input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let records = read_classified(input)?;
    let summary = partition_corpus(&records, out_dir)?;
    eprintln!(
        "wrote band_1.jsonl .. band_6.jsonl under {}",
        out_dir.display()
    );
    print_json(&summary)
}

pub fn emit_finetune(partition_dir: &Path, out_dir: &Path, format: &str) -> Result<(), CliError> {
    let format: FinetuneFormat = format.parse().map_err(CliError::from)?;
    let counts = emit_finetune_files(partition_dir, format, out_dir)?;
    print_json(&serde_json::json!({ "written": counts }))
}

pub fn gen_prompts(
    question: Option<&str>,
    subjects: bool,
    taxonomy: Option<&Path>,
    per_subject: usize,
) -> Result<(), CliError> {
    if let Some(question) = question {
        let prompts = expand_prompts(question)?;
        return write_jsonl(&prompts, None);
    }
    if subjects {
        let taxonomy = match taxonomy {
            Some(path) => SubjectTaxonomy::from_path(path)?,
            None => SubjectTaxonomy::bundled(),
        };
        taxonomy.validate()?;
        let prompts = taxonomy.question_prompts(per_subject);
        return write_jsonl(&prompts, None);
    }
    Err(CliError::Validation(
        "nothing to render: pass --question <text> or --subjects".into(),
    ))
}

fn build_limiter(config: &ProviderConfig) -> Result<Option<TokenBucket>, CliError> {
    match config.requests_per_second {
        Some(rate) => {
            let capacity = config.burst.unwrap_or(1).max(1);
            Ok(Some(TokenBucket::new(capacity, rate)?))
        }
        None => Ok(None),
    }
}

pub fn generate(
    config: &CliConfig,
    question: &str,
    question_id: &str,
    seed: u64,
    provider_flag: Option<&str>,
) -> Result<(), CliError> {
    let prompts = expand_prompts(question)?;
    let kind = provider_flag
        .or(config.provider.kind.as_deref())
        .unwrap_or("mock");
    let outcome = match kind {
        "mock" => generate_answers(question_id, &prompts, &MockProvider::new(seed)),
        "http" => {
            let mut policy = RetryPolicy::default();
            if let Some(attempts) = config.provider.max_attempts {
                policy.max_attempts = attempts;
            }
            let provider = Throttled::new(
                HttpProvider::from_config(&config.provider)?,
                policy,
                build_limiter(&config.provider)?,
            );
            generate_answers(question_id, &prompts, &provider)
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown provider {other:?}; expected \"mock\" or \"http\""
            )))
        }
    };
    write_jsonl(&outcome.records, None)?;
    for failure in &outcome.failures {
        eprintln!(
            "gradeband: prompt {} (band {}, cap {}) failed: {}",
            failure.index, failure.target_band, failure.max_words_per_sentence, failure.error
        );
    }
    if !outcome.failures.is_empty() {
        return Err(CliError::Io(format!(
            "{} of {} generations failed",
            outcome.failures.len(),
            prompts.len()
        )));
    }
    eprintln!("generated {} records for {question_id:?}", outcome.records.len());
    Ok(())
}

pub fn evaluate(
    resolved: &Resolved,
    classified: &Path,
    targets: Option<&Path>,
    report_path: Option<&Path>,
    confusion_path: Option<&Path>,
) -> Result<(), CliError> {
    let mut records = read_classified(classified)?;
    if let Some(path) = targets {
        let overrides = read_targets(path)?;
        for record in &mut records {
            if let Some(&band) = overrides.get(record.record.id.as_str()) {
                record.record.target_band = Some(band);
            }
        }
    }
    let with_targets = records
        .iter()
        .filter(|r| r.record.target_band.is_some())
        .count();
    if with_targets < records.len() {
        eprintln!(
            "gradeband: {} of {} records carry no target band and are skipped",
            records.len() - with_targets,
            records.len()
        );
    }
    let report = evaluate_records(&records, &resolved.mapping)?;
    if let Some(path) = confusion_path {
        std::fs::write(path, confusion_csv(&report.confusion))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    match report_path {
        Some(path) => {
            let pretty = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Io(e.to_string()))?;
            std::fs::write(path, pretty + "\n")
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote report to {}", path.display());
            Ok(())
        }
        None => print_json(&report),
    }
}

fn read_targets(path: &Path) -> Result<HashMap<String, GradeBand>, CliError> {
    #[derive(serde::Deserialize)]
    struct TargetLine {
        id: String,
        target_band: GradeBand,
    }
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut targets = HashMap::new();
    for (idx, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TargetLine = serde_json::from_str(line).map_err(|e| {
            CliError::Validation(format!("{}:{}: {e}", path.display(), idx + 1))
        })?;
        targets.insert(parsed.id, parsed.target_band);
    }
    Ok(targets)
}

pub fn survey(rankings: Option<&Path>, ratings: Option<&Path>) -> Result<(), CliError> {
    if rankings.is_none() && ratings.is_none() {
        return Err(CliError::Validation(
            "nothing to summarize: pass --rankings and/or --ratings".into(),
        ));
    }
    let mut output = serde_json::Map::new();
    if let Some(path) = rankings {
        let survey = read_ranking_csv(path)?;
        let summary = summarize_rankings(&survey)?;
        output.insert(
            "rankings".into(),
            serde_json::to_value(&summary).map_err(|e| CliError::Io(e.to_string()))?,
        );
    }
    if let Some(path) = ratings {
        let rows = read_rating_csv(path)?;
        let boxes = rating_box_stats(&rows);
        output.insert(
            "ratings".into(),
            serde_json::to_value(&boxes).map_err(|e| CliError::Io(e.to_string()))?,
        );
    }
    print_json(&serde_json::Value::Object(output))
}

pub fn diversity(base: &Path, new_corpus: &Path, dim: usize) -> Result<(), CliError> {
    if dim == 0 {
        return Err(CliError::Validation("--dim must be at least 1".into()));
    }
    let (base_records, _) = read_records(base, false)?;
    let (new_records, _) = read_records(new_corpus, false)?;
    let answers = |records: &[gradeband::CorpusRecord]| -> Vec<String> {
        records.iter().map(|r| r.answer.clone()).collect()
    };
    let embedder = HashedBagEmbedder::new(dim);
    let gain = diversity_gain(&answers(&base_records), &answers(&new_records), &embedder)?;
    print_json(&serde_json::json!({
        "diversity_gain": gain,
        "base_records": base_records.len(),
        "new_records": new_records.len(),
    }))
}
