//! Walks the whole pipeline through real files in a temporary directory:
//! raw JSON Lines in, classified partitions and fine-tune files out, then
//! prompt expansion against the mock provider and the evaluation readers.

use std::collections::HashSet;
use std::io::Write as _;
use std::path::Path;

use gradeband::corpus::{
    band_file_name, classify_records_lenient, emit_finetune_files, expand_prompts,
    generate_answers, partition_corpus, read_records, FinetuneFormat, SubjectTaxonomy,
};
use gradeband::eval::{
    confusion_csv, perplexity, read_ranking_csv, read_rating_csv, rating_box_stats,
    sentence_length_distribution, summarize_rankings, zipf_table, PrecomputedLogprobs,
};
use gradeband::{
    evaluate_records, synth, BandMappingConfig, GradeBand, MockProvider, WordLists,
};

fn write_file(path: &Path, content: &str) {
    let mut file = std::fs::File::create(path).unwrap();
    file.write_all(content.as_bytes()).unwrap();
}

#[test]
fn files_in_files_out() {
    let dir = tempfile::tempdir().unwrap();
    let lists = WordLists::bundled();
    let config = BandMappingConfig::default();

    // --- ingest: good records, a blank line, a broken line, an empty answer
    let input_path = dir.path().join("input.jsonl");
    let mut input = String::new();
    for record in synth::corpus(5, 7) {
        input.push_str(&serde_json::to_string(&record).unwrap());
        input.push('\n');
    }
    input.push('\n');
    input.push_str("{\"id\": \"broken\"\n");
    input.push_str("{\"id\": \"hollow\", \"question\": \"Why?\", \"answer\": \"   \"}\n");
    write_file(&input_path, &input);

    let (records, read_failures) = read_records(&input_path, true).unwrap();
    assert_eq!(records.len(), 31);
    assert_eq!(read_failures.len(), 1, "only the broken line fails to parse");

    let (classified, classify_failures) =
        classify_records_lenient(records, &lists, &config, 2);
    assert_eq!(classified.len(), 30);
    assert_eq!(classify_failures.len(), 1, "the blank answer fails to classify");

    // --- partition and fine-tune emission
    let partition_dir = dir.path().join("partition");
    let summary = partition_corpus(&classified, &partition_dir).unwrap();
    assert_eq!(summary.total, 30);

    let finetune_dir = dir.path().join("finetune");
    let counts = emit_finetune_files(&partition_dir, FinetuneFormat::Chat, &finetune_dir).unwrap();
    assert_eq!(counts, summary.counts);

    let mut seen_answers = HashSet::new();
    for band in GradeBand::ALL {
        let slot = (band.index() - 1) as usize;
        let partition_text =
            std::fs::read_to_string(partition_dir.join(band_file_name(band))).unwrap();
        assert_eq!(partition_text.lines().count(), summary.counts[slot]);
        let finetune_text = std::fs::read_to_string(
            finetune_dir.join(format!("finetune_band_{}.jsonl", band.index())),
        )
        .unwrap();
        assert_eq!(finetune_text.lines().count(), counts[slot]);
        for line in finetune_text.lines() {
            let value: serde_json::Value = serde_json::from_str(line).unwrap();
            let messages = value["messages"].as_array().unwrap();
            assert_eq!(messages.len(), 2);
            assert_eq!(messages[0]["role"], "user");
            assert_eq!(messages[1]["role"], "assistant");
            seen_answers.insert(messages[1]["content"].as_str().unwrap().to_string());
        }
    }
    assert_eq!(seen_answers.len(), 30, "every answer survives the round trip");

    // --- question generation through the mock provider
    let taxonomy = SubjectTaxonomy::bundled();
    taxonomy.validate().unwrap();
    assert_eq!(taxonomy.subject_count(), 54);
    let provider = MockProvider::new(99);
    let subject_prompts = taxonomy.question_prompts(3);
    assert_eq!(subject_prompts.len(), 54);
    let questions = {
        use gradeband::TextProvider as _;
        provider.complete(&subject_prompts[0].rendered_text).unwrap()
    };
    let question = questions.lines().next().unwrap().to_string();
    assert_eq!(questions.lines().count(), 3);

    // --- answer generation across the 54-prompt grid, then evaluation
    let prompts = expand_prompts(&question).unwrap();
    let outcome = generate_answers("q0", &prompts, &provider);
    assert!(outcome.failures.is_empty());
    assert_eq!(outcome.records.len(), 54);

    let (generated, failures) = classify_records_lenient(outcome.records, &lists, &config, 0);
    assert!(failures.is_empty());
    let report = evaluate_records(&generated, &config).unwrap();
    assert_eq!(report.total, 54);
    let produced: u64 = report.confusion.iter().flatten().sum();
    assert_eq!(produced, 54);
    assert!((0.0..=100.0).contains(&report.overall_pct));
    let csv_text = confusion_csv(&report.confusion);
    assert_eq!(csv_text.lines().count(), 7, "header plus six band rows");

    // --- survey readers
    let ranking_path = dir.path().join("ranking.csv");
    write_file(
        &ranking_path,
        "rater_id,position,assigned_rank\n\
         r1,1,1\nr1,2,2\nr1,3,3\nr1,4,4\nr1,5,5\nr1,6,6\n\
         r2,1,2\nr2,2,1\nr2,3,3\nr2,4,4\nr2,5,6\nr2,6,5\n",
    );
    let survey = read_ranking_csv(&ranking_path).unwrap();
    let ranking_summary = summarize_rankings(&survey).unwrap();
    assert_eq!(ranking_summary.per_rater_tau.len(), 2);
    assert_eq!(ranking_summary.per_rater_tau[0].1, 1.0);
    assert!((ranking_summary.mean_tau - ranking_summary.pooled_tau).abs() < 1e-12);

    let rating_path = dir.path().join("rating.csv");
    write_file(
        &rating_path,
        "rater_id,band,q1,q2,q3\nr1,1,5,4,5\nr1,2,4,4,4\nr2,1,3,4,2\nr2,2,5,5,4\n",
    );
    let rows = read_rating_csv(&rating_path).unwrap();
    let boxes = rating_box_stats(&rows);
    assert!(boxes[0][0].is_some());
    assert!(boxes[2][0].is_none(), "no rows rated band 3");

    // --- perplexity from precomputed log-probabilities
    let logprob_path = dir.path().join("logprobs.jsonl");
    let quarter = 0.25f64.ln();
    write_file(
        &logprob_path,
        &format!(
            "{}\n{}\n",
            serde_json::json!({"text": "alpha", "logprobs": [quarter, quarter]}),
            serde_json::json!({"text": "beta", "logprobs": [quarter]}),
        ),
    );
    let source = PrecomputedLogprobs::from_jsonl(&logprob_path).unwrap();
    let ppl = perplexity(&["alpha".to_string(), "beta".to_string()], &source).unwrap();
    assert!((ppl - 4.0).abs() < 1e-9);

    // --- descriptive statistics over the generated texts
    let texts: Vec<String> = generated.iter().map(|r| r.record.answer.clone()).collect();
    let lengths = sentence_length_distribution(&texts, &lists).unwrap();
    assert!(lengths.total_sentences > 0);
    assert!(lengths.mean > 0.0);
    let (table, total_words) = zipf_table(&texts, 2);
    assert!(!table.is_empty());
    assert!(table.windows(2).all(|w| w[0].1 >= w[1].1), "sorted by count");
    assert!(total_words as usize >= table.len());
}
