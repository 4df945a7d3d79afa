//! Deterministic text embeddings for diversity measurement.
//!
//! The [`Embedder`] trait keeps the diversity math independent of any hosted
//! embedding service; the bundled implementation hashes lowercased tokens
//! into a fixed-width term-frequency vector and L2-normalizes it, so equal
//! text always embeds identically.

use crate::provider::ProviderError;
use crate::text::tokenize_words;

/// Maps text into a fixed-dimension vector.
pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;
    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderError>;
}

/// Hashed bag-of-words embedder: token counts bucketed by FNV-1a, then
/// L2-normalized. Texts without word tokens embed to the zero vector.
#[derive(Debug, Clone)]
pub struct HashedBagEmbedder {
    dimension: usize,
}

impl HashedBagEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        HashedBagEmbedder { dimension }
    }
}

impl Default for HashedBagEmbedder {
    fn default() -> Self {
        HashedBagEmbedder::new(256)
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

impl Embedder for HashedBagEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderError> {
        let mut vector = vec![0.0f64; self.dimension];
        for token in tokenize_words(text) {
            let bucket = (fnv1a(token.to_lowercase().as_bytes()) % self.dimension as u64) as usize;
            vector[bucket] += 1.0;
        }
        let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in &mut vector {
                *v /= norm;
            }
        }
        Ok(vector)
    }
}

/// Euclidean distance between two equal-length vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embeddings_are_unit_length_and_deterministic() {
        let embedder = HashedBagEmbedder::default();
        let a = embedder.embed("The cat sat on the mat.").unwrap();
        let b = embedder.embed("The cat sat on the mat.").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 256);
        let norm: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tokenization_feeds_the_embedding() {
        let embedder = HashedBagEmbedder::new(64);
        // same bag of words, different punctuation and case
        let a = embedder.embed("The CAT sat!").unwrap();
        let b = embedder.embed("the cat sat").unwrap();
        assert_eq!(a, b);
        let c = embedder.embed("an entirely different sentence").unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn wordless_text_embeds_to_zero() {
        let embedder = HashedBagEmbedder::new(16);
        let v = embedder.embed("?!").unwrap();
        assert!(v.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn euclidean_distance_matches_hand_values() {
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
        assert_eq!(euclidean_distance(&[1.0], &[1.0]), 0.0);
    }
}
