//! End-to-end and per-stage benchmarks: single-text scoring, sentence
//! statistics, band integration, and bulk classification throughput.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use std::collections::BTreeMap;
use std::hint::black_box;

use gradeband::corpus::classify_records;
use gradeband::integrate::integrate_bands;
use gradeband::{
    compute_text_stats, score_all, BandMappingConfig, GradeBand, MetricId, WordLists,
};
use gradeband_bench::{sample_corpus, sample_text};

fn bench_text_stats(c: &mut Criterion) {
    let lists = WordLists::bundled();
    let text = sample_text();
    c.bench_function("text_stats", |b| {
        b.iter(|| compute_text_stats(black_box(&text), &lists).unwrap())
    });
}

fn bench_score_all(c: &mut Criterion) {
    let lists = WordLists::bundled();
    let config = BandMappingConfig::default();
    let text = sample_text();
    c.bench_function("score_all", |b| {
        b.iter(|| score_all(black_box(&text), &lists, &config).unwrap())
    });
}

fn bench_integration(c: &mut Criterion) {
    // a fixed spread of ballots: unanimous, mode, and median outcomes
    let assignments: Vec<BTreeMap<MetricId, GradeBand>> = (0..64u8)
        .map(|i| {
            MetricId::INTEGRATED
                .into_iter()
                .enumerate()
                .map(|(slot, metric)| {
                    let band = GradeBand::new((i.wrapping_add(slot as u8) % 6) + 1).unwrap();
                    (metric, band)
                })
                .collect()
        })
        .collect();
    c.bench_function("integrate_64_assignments", |b| {
        b.iter(|| {
            for assignment in &assignments {
                black_box(integrate_bands(black_box(assignment)).unwrap());
            }
        })
    });
}

fn bench_classify(c: &mut Criterion) {
    let lists = WordLists::bundled();
    let config = BandMappingConfig::default();
    let records = sample_corpus(100);
    let mut group = c.benchmark_group("classify");
    group.throughput(Throughput::Elements(records.len() as u64));
    group.sample_size(20);
    for jobs in [1usize, 0] {
        let label = if jobs == 0 { "all_cores" } else { "single_thread" };
        group.bench_function(label, |b| {
            b.iter_batched(
                || records.clone(),
                |batch| classify_records(batch, &lists, &config, jobs).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_text_stats,
    bench_score_all,
    bench_integration,
    bench_classify
);
criterion_main!(benches);
