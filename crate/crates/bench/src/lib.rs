//! Shared fixtures for the criterion benchmarks: a synthetic corpus and a
//! mixed-band sample text, both fixed-seed so runs compare like with like.

use gradeband::{synth, CorpusRecord, GradeBand};

pub const BENCH_SEED: u64 = 0xBE7C;

/// `per_band * 6` synthetic records covering every grade band.
pub fn sample_corpus(per_band: usize) -> Vec<CorpusRecord> {
    synth::corpus(per_band, BENCH_SEED)
}

/// One paragraph of medium-difficulty text for single-document benches.
pub fn sample_text() -> String {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(BENCH_SEED);
    let band = GradeBand::new(4).expect("4 is a band");
    synth::text_for_band(band, 12, None, &mut rng)
}
