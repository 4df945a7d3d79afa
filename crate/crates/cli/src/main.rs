//! `gradeband` — readability analysis, grade-band classification, and the
//! corpus pipeline behind it, as one binary.
//!
//! Machine-readable results go to stdout; everything meant for a human
//! (progress, summaries, per-line diagnostics) goes to stderr. Exit codes:
//! 0 success, 1 for I/O or provider trouble, 2 for invalid input.

mod commands;
mod config;
mod http;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gradeband::corpus::CorpusError;
use gradeband::eval::EvalError;
use gradeband::{BandError, IntegrateError, ListError, MetricError, ProviderError, TextError};

#[derive(Debug)]
pub enum CliError {
    /// Files, network, providers: retrying might help. Exit 1.
    Io(String),
    /// The input itself is unacceptable: retrying will not help. Exit 2.
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(msg) | CliError::Validation(msg) => msg,
        }
    }
}

impl From<TextError> for CliError {
    fn from(err: TextError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<BandError> for CliError {
    fn from(err: BandError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<ProviderError> for CliError {
    fn from(err: ProviderError) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<IntegrateError> for CliError {
    fn from(err: IntegrateError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<ListError> for CliError {
    fn from(err: ListError) -> Self {
        match err {
            ListError::Io { .. } => CliError::Io(err.to_string()),
            ListError::BadEntry { .. } => CliError::Validation(err.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(err: MetricError) -> Self {
        match err {
            MetricError::Io { .. } => CliError::Io(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(err: CorpusError) -> Self {
        match err {
            CorpusError::Io { .. } => CliError::Io(err.to_string()),
            CorpusError::Metric(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(err: EvalError) -> Self {
        match err {
            EvalError::Io { .. } => CliError::Io(err.to_string()),
            EvalError::Provider(inner) => inner.into(),
            EvalError::Metric(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "gradeband",
    version,
    about = "Readability metrics, grade-band classification, and corpus tools"
)]
struct Cli {
    /// TOML config with word-list paths, band mapping, provider settings
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Band-mapping TOML overriding the built-in thresholds
    #[arg(long, global = true, value_name = "FILE")]
    mapping: Option<PathBuf>,

    /// Replacement familiar-word list (pairs with --spache)
    #[arg(long, global = true, value_name = "FILE")]
    dale_chall: Option<PathBuf>,

    /// Replacement easy-word list (pairs with --dale-chall)
    #[arg(long, global = true, value_name = "FILE")]
    spache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a text against every metric and integrate the grade band
    Analyze {
        /// Text to analyze; omit to use --file or stdin
        text: Option<String>,
        /// Read the text from a file instead
        #[arg(long, conflicts_with = "text")]
        file: Option<PathBuf>,
        /// Emit one JSON object instead of the table
        #[arg(long)]
        json: bool,
    },
    /// Classify a JSON Lines corpus into grade bands
    Classify {
        /// Input corpus (JSONL with id/question/answer)
        input: PathBuf,
        /// Where to write classified records (default: stdout)
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Skip bad records with a diagnostic instead of stopping
        #[arg(long)]
        lenient: bool,
        /// Worker threads; 0 means one per core
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Split classified records into one file per grade band
    Partition {
        /// Classified corpus (output of `classify`)
        input: PathBuf,
        /// Directory for band_1.jsonl .. band_6.jsonl
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Convert partitioned records into fine-tuning chat files
    EmitFinetune {
        /// Directory holding band_1.jsonl .. band_6.jsonl
        #[arg(long)]
        partition_dir: PathBuf,
        /// Directory for finetune_band_N.jsonl files
        #[arg(long)]
        out_dir: PathBuf,
        /// Output format (only "chat" exists today)
        #[arg(long, default_value = "chat")]
        format: String,
    },
    /// Render generation prompts without calling any provider
    GenPrompts {
        /// Expand the 54-prompt grid for this question
        #[arg(long, conflicts_with = "subjects")]
        question: Option<String>,
        /// Render question-generation prompts for the subject taxonomy
        #[arg(long)]
        subjects: bool,
        /// Taxonomy JSON to use instead of the bundled one
        #[arg(long, requires = "subjects")]
        taxonomy: Option<PathBuf>,
        /// Questions requested per subject
        #[arg(long, default_value_t = 3, requires = "subjects")]
        per_subject: usize,
    },
    /// Generate graded answers for a question across the prompt grid
    Generate {
        #[arg(long)]
        question: String,
        /// Prefix for generated record ids
        #[arg(long, default_value = "q0")]
        question_id: String,
        /// Mock-provider seed, for reproducible corpora
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Provider to use: "mock" or "http" (default from config)
        #[arg(long)]
        provider: Option<String>,
    },
    /// Compare classified outputs against their target bands
    Evaluate {
        /// Classified records (output of `classify`)
        #[arg(long)]
        classified: PathBuf,
        /// Optional JSONL of {"id", "target_band"} overriding targets
        #[arg(long)]
        targets: Option<PathBuf>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write the confusion matrix as CSV
        #[arg(long)]
        confusion: Option<PathBuf>,
    },
    /// Summarize human ranking and rating surveys
    Survey {
        /// Ranking CSV: rater_id,position,assigned_rank
        #[arg(long)]
        rankings: Option<PathBuf>,
        /// Rating CSV: rater_id,band,q1,q2,q3
        #[arg(long)]
        ratings: Option<PathBuf>,
    },
    /// Mean distance from new texts to their nearest base text
    Diversity {
        /// Base corpus (JSONL records; answers are embedded)
        #[arg(long)]
        base: PathBuf,
        /// New corpus to measure against the base
        #[arg(long = "new")]
        new_corpus: PathBuf,
        /// Embedding dimension of the hashed bag-of-words
        #[arg(long, default_value_t = 256)]
        dim: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("gradeband: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = config::CliConfig::load(cli.config.as_deref())?;
    let resolved = config::resolve(
        &config,
        cli.dale_chall.as_deref(),
        cli.spache.as_deref(),
        cli.mapping.as_deref(),
    )?;
    match cli.command {
        Command::Analyze { text, file, json } => commands::analyze(&resolved, text, file, json),
        Command::Classify {
            input,
            output,
            lenient,
            jobs,
        } => commands::classify(&resolved, &input, output.as_deref(), lenient, jobs),
        Command::Partition { input, out_dir } => commands::partition(&input, &out_dir),
        Command::EmitFinetune {
            partition_dir,
            out_dir,
            format,
        } => commands::emit_finetune(&partition_dir, &out_dir, &format),
        Command::GenPrompts {
            question,
            subjects,
            taxonomy,
            per_subject,
        } => commands::gen_prompts(question.as_deref(), subjects, taxonomy.as_deref(), per_subject),
        Command::Generate {
            question,
            question_id,
            seed,
            provider,
        } => commands::generate(&config, &question, &question_id, seed, provider.as_deref()),
        Command::Evaluate {
            classified,
            targets,
            report,
            confusion,
        } => commands::evaluate(
            &resolved,
            &classified,
            targets.as_deref(),
            report.as_deref(),
            confusion.as_deref(),
        ),
        Command::Survey { rankings, ratings } => {
            commands::survey(rankings.as_deref(), ratings.as_deref())
        }
        Command::Diversity {
            base,
            new_corpus,
            dim,
        } => commands::diversity(&base, &new_corpus, dim),
    }
}
