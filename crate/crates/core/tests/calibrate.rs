//! Manual calibration probe for the synthetic corpus generator. Run with
//! `cargo test --test calibrate -- --ignored --nocapture` to print per-band
//! metric matrices; not part of the regular suite.

use std::collections::BTreeMap;

use gradeband::corpus::classify_record;
use gradeband::metrics::MetricId;
use gradeband::{map_to_band, synth, BandMappingConfig, GradeBand, WordLists};

#[test]
#[ignore]
fn print_band_matrices() {
    let lists = WordLists::bundled();
    let config = BandMappingConfig::default();
    let seed: u64 = std::env::var("CAL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20260825);
    println!("seed: {seed}");
    let records = synth::corpus(100, seed);
    let classified: Vec<_> = records
        .into_iter()
        .map(|r| classify_record(r, &lists, &config).unwrap())
        .collect();

    let mut per_band: BTreeMap<u8, Vec<&gradeband::ClassifiedRecord>> = BTreeMap::new();
    for record in &classified {
        per_band
            .entry(record.record.target_band.unwrap().index())
            .or_default()
            .push(record);
    }

    println!("\nband | n   | mean-int | mean-ari-band | agree+-1 | exact");
    let mut agree_total = 0usize;
    for (band, records) in &per_band {
        let n = records.len() as f64;
        let mean_int: f64 = records.iter().map(|r| r.band.index() as f64).sum::<f64>() / n;
        let mean_ari: f64 =
            records.iter().map(|r| r.ari_band.index() as f64).sum::<f64>() / n;
        let agree = records
            .iter()
            .filter(|r| r.band.index().abs_diff(r.ari_band.index()) <= 1)
            .count();
        agree_total += agree;
        let exact = records.iter().filter(|r| r.band.index() == *band).count();
        println!(
            "  {band}  | {} | {mean_int:8.2} | {mean_ari:13.2} | {:8.1}% | {:5.1}%",
            records.len(),
            100.0 * agree as f64 / n,
            100.0 * exact as f64 / n,
        );
    }
    println!(
        "overall integrated-vs-ari within 1 band: {:.1}%",
        100.0 * agree_total as f64 / classified.len() as f64
    );

    println!("\nmean mapped band per metric (rows = target band):");
    print!("band ");
    for metric in MetricId::INTEGRATED {
        print!("| {:>6} ", metric.name());
    }
    println!("| {:>6}", "ari");
    for (band, records) in &per_band {
        let n = records.len() as f64;
        print!("  {band}  ");
        for metric in MetricId::INTEGRATED {
            let mean: f64 = records
                .iter()
                .map(|r| {
                    map_to_band(metric, r.scores[&metric], &config)
                        .unwrap()
                        .index() as f64
                })
                .sum::<f64>()
                / n;
            print!("| {mean:6.2} ");
        }
        let mean_ari: f64 =
            records.iter().map(|r| r.ari_band.index() as f64).sum::<f64>() / n;
        println!("| {mean_ari:6.2}");
    }

    println!("\nmean raw score per metric (rows = target band):");
    for (band, records) in &per_band {
        let n = records.len() as f64;
        print!("  {band}  ");
        for metric in MetricId::INTEGRATED {
            let mean: f64 =
                records.iter().map(|r| r.scores[&metric]).sum::<f64>() / n;
            print!("| {mean:7.2} ");
        }
        let mean_ari: f64 = records.iter().map(|r| r.ari).sum::<f64>() / n;
        println!("| {mean_ari:7.2}");
    }

    let mut decisions: BTreeMap<&str, usize> = BTreeMap::new();
    for record in &classified {
        *decisions
            .entry(match record.decided_by {
                gradeband::DecisionRule::Unanimous => "unanimous",
                gradeband::DecisionRule::Mode => "mode",
                gradeband::DecisionRule::Median => "median",
            })
            .or_default() += 1;
    }
    println!("\ndecision rules: {decisions:?}");

    let bands_seen: std::collections::BTreeSet<u8> =
        classified.iter().map(|r| r.band.index()).collect();
    println!("distinct integrated bands: {bands_seen:?}");
    let _ = GradeBand::ALL;
}
