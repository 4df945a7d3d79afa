//! Seeded synthetic English generator.
//!
//! Produces nonsense-but-well-formed text pitched at a requested grade band
//! by mixing word pools of known syllable count, length, and word-list
//! familiarity. The mock provider, the fixture corpus used in tests, and the
//! benchmarks all draw from here; everything is deterministic under a fixed
//! seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::band::GradeBand;
use crate::corpus::CorpusRecord;

/// Short one-syllable words on both familiar-word lists.
pub const SHORT_EASY: &[&str] = &[
    "the", "a", "and", "we", "go", "to", "run", "play", "see", "big", "red", "sun", "day", "dog",
    "cat", "fun", "hat", "man", "sit", "box", "cup", "bed", "egg", "pig", "cow", "boy", "girl",
    "ball", "tree", "fish", "bird", "home", "jump", "walk", "look", "like", "good", "this",
    "that", "with", "will", "came", "went", "said", "they", "them", "was", "it", "on", "in",
    "at", "up", "down", "out", "new", "old", "hot", "rain", "snow", "star", "moon", "hand",
    "head", "door", "book", "milk", "farm", "duck", "car", "toy", "top", "leg", "arm", "eye",
    "nose", "face", "game", "pet", "ride", "sing", "stop", "wind", "road", "get", "let", "not",
    "but", "for", "her", "him", "his", "she", "had", "has", "can", "did", "eat", "ran", "sat",
];

/// Longer one-syllable words on both lists; these raise letters-per-word
/// without touching the syllable rate.
pub const LONG_EASY: &[&str] = &[
    "street", "school", "friend", "ground", "thought", "strong", "spring", "watch", "house",
    "mouth", "grass", "black", "white", "green", "brown", "clean", "climb", "front", "light",
    "night", "right", "round", "small", "stand", "still", "sweet", "thank", "there", "these",
    "those", "three", "train", "think", "thing", "would", "write", "bread", "sleep", "stone",
    "chair", "child",
];

/// Two-syllable words on both lists.
pub const MEDIUM: &[&str] = &[
    "water", "little", "yellow", "garden", "window", "summer", "winter", "morning", "mother",
    "father", "sister", "brother", "dinner", "table", "letter", "happy", "apple", "baby",
    "candy", "city", "corner", "doctor", "early", "penny", "puppy", "rabbit", "river",
    "seven", "supper", "teacher", "wagon", "basket", "better", "birthday", "children",
    "chicken", "kitten", "pocket", "flower", "story", "money", "monkey", "mountain", "paper",
];

/// Words of at most two counted syllables that appear on neither list;
/// these raise the unfamiliar-word rates without adding syllables.
pub const JARGON: &[&str] = &[
    "quantum", "vector", "matrix", "proton", "neutron", "syntax", "cosine", "tangent",
    "voltage", "circuit", "enzyme", "neuron", "plasma", "torque", "pixel", "liter", "gauge",
    "axiom", "lemma", "theorem", "median", "laser", "radar", "sonar", "argon", "xenon",
    "helium", "flux", "spectrum", "genome", "membrane",
];

/// Three-or-more-syllable words, seven to nine letters, on neither list.
pub const HARD: &[&str] = &[
    "momentum", "inertia", "velocity", "algorithm", "periodic", "molecular", "equation",
    "gravity", "habitat", "organism", "particle", "estimate", "analysis", "hypothesis",
    "catalyst", "polymer", "isotope", "industry", "dynamic",
    "magnitude", "amplitude", "frequency", "chemical", "physical", "digital", "numerical",
];

/// Long polysyllabic words on neither list; these drive the top band.
pub const HARD_LONG: &[&str] = &[
    "phenomenon", "equilibrium", "methodology", "quantitative", "thermodynamics",
    "computational", "philosophical", "jurisdiction", "optimization", "differential",
    "configuration", "probabilistic", "institutional", "photosynthesis", "biodiversity",
    "electromagnetic", "constitutional", "interpretation", "sustainability", "architecture",
    "laboratory", "civilization", "communication", "representation", "experimental",
    "international", "environmental", "temperature", "acceleration", "trigonometry",
    "relativity", "coefficient", "denominator", "semiconductor", "infrastructure",
];

/// Per-text sampling ranges for one band: words per sentence plus the draw
/// probability range of each non-baseline pool (the remainder is short easy
/// words).
#[derive(Debug, Clone, Copy)]
struct BandProfile {
    words: (usize, usize),
    long_easy: (f64, f64),
    medium: (f64, f64),
    jargon: (f64, f64),
    hard: (f64, f64),
    hard_long: (f64, f64),
}

const PROFILES: [BandProfile; 6] = [
    BandProfile {
        words: (4, 5),
        long_easy: (0.05, 0.15),
        medium: (0.00, 0.04),
        jargon: (0.0, 0.0),
        hard: (0.0, 0.0),
        hard_long: (0.0, 0.0),
    },
    BandProfile {
        words: (7, 8),
        long_easy: (0.16, 0.28),
        medium: (0.16, 0.24),
        jargon: (0.03, 0.07),
        hard: (0.01, 0.03),
        hard_long: (0.0, 0.0),
    },
    BandProfile {
        words: (10, 11),
        long_easy: (0.16, 0.28),
        medium: (0.13, 0.21),
        jargon: (0.05, 0.09),
        hard: (0.03, 0.05),
        hard_long: (0.00, 0.02),
    },
    BandProfile {
        words: (13, 14),
        long_easy: (0.14, 0.26),
        medium: (0.16, 0.24),
        jargon: (0.06, 0.10),
        hard: (0.07, 0.11),
        hard_long: (0.01, 0.03),
    },
    BandProfile {
        words: (16, 18),
        long_easy: (0.10, 0.22),
        medium: (0.12, 0.19),
        jargon: (0.08, 0.13),
        hard: (0.08, 0.12),
        hard_long: (0.02, 0.06),
    },
    BandProfile {
        words: (22, 26),
        long_easy: (0.08, 0.16),
        medium: (0.18, 0.26),
        jargon: (0.00, 0.04),
        hard: (0.10, 0.16),
        hard_long: (0.12, 0.18),
    },
];

fn sample(range: (f64, f64), rng: &mut impl Rng) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..range.1)
    }
}

fn pick<'a>(pool: &[&'a str], rng: &mut impl Rng) -> &'a str {
    pool[rng.random_range(0..pool.len())]
}

/// Generates `sentences` sentences pitched at the band; `word_cap`, when
/// given, clamps the words-per-sentence draw from above.
pub fn text_for_band(
    band: GradeBand,
    sentences: usize,
    word_cap: Option<usize>,
    rng: &mut impl Rng,
) -> String {
    let profile = PROFILES[(band.index() - 1) as usize];
    // per-text jitter: each text commits to its own pool mix so band-level
    // metric distributions straddle the mapping boundaries
    let long_easy = sample(profile.long_easy, rng);
    let medium = sample(profile.medium, rng);
    let jargon = sample(profile.jargon, rng);
    let hard = sample(profile.hard, rng);
    let hard_long = sample(profile.hard_long, rng);

    let mut out = String::new();
    for s in 0..sentences {
        if s > 0 {
            out.push(' ');
        }
        let mut count = rng.random_range(profile.words.0..=profile.words.1);
        if let Some(cap) = word_cap {
            count = count.min(cap.max(2));
        }
        for w in 0..count {
            if w > 0 {
                out.push(' ');
            }
            let roll: f64 = rng.random();
            let word = if roll < hard_long {
                pick(HARD_LONG, rng)
            } else if roll < hard_long + hard {
                pick(HARD, rng)
            } else if roll < hard_long + hard + jargon {
                pick(JARGON, rng)
            } else if roll < hard_long + hard + jargon + medium {
                pick(MEDIUM, rng)
            } else if roll < hard_long + hard + jargon + medium + long_easy {
                pick(LONG_EASY, rng)
            } else {
                pick(SHORT_EASY, rng)
            };
            if w == 0 {
                let mut chars = word.chars();
                if let Some(first) = chars.next() {
                    out.extend(first.to_uppercase());
                    out.push_str(chars.as_str());
                }
            } else {
                out.push_str(word);
            }
        }
        out.push('.');
    }
    out
}

const QUESTION_TOPICS: &[&str] = &[
    "rain", "gravity", "music", "painting", "volcanoes", "elections", "magnets", "bread",
    "bridges", "planets", "rivers", "memory", "maps", "seasons", "shadows", "batteries",
];

/// A newline-separated list of synthetic questions.
pub fn question_lines(count: usize, rng: &mut impl Rng) -> String {
    let mut lines = Vec::with_capacity(count);
    for _ in 0..count.max(1) {
        let topic = pick(QUESTION_TOPICS, rng);
        lines.push(format!("How does {topic} work?"));
    }
    lines.join("\n")
}

/// A deterministic corpus with `per_band` records aimed at each band, in
/// band-major order.
pub fn corpus(per_band: usize, seed: u64) -> Vec<CorpusRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(per_band * 6);
    for band in GradeBand::ALL {
        for i in 0..per_band {
            let sentences = rng.random_range(5..=9);
            let answer = text_for_band(band, sentences, None, &mut rng);
            records.push(CorpusRecord {
                id: format!("synth-b{}-{i:05}", band.index()),
                question: format!("Sample question {i} for band {}?", band.index()),
                answer,
                field: None,
                subject: None,
                target_band: Some(band),
            });
        }
    }
    records
}
