//! Text-generation provider abstraction with retry and rate limiting.
//!
//! Corpus generation talks to a provider through the [`TextProvider`] trait.
//! A deterministic [`MockProvider`] ships in-crate so generation and its
//! tests never touch the network; HTTP-backed providers live with the CLI.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::band::GradeBand;
use crate::embed::fnv1a;
use crate::synth;

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("provider request failed: {0}")]
    Request(String),
    #[error("provider configuration: {0}")]
    Config(String),
    #[error("gave up after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: String },
}

/// Synchronous text completion: one prompt in, one completion out.
pub trait TextProvider: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, ProviderError>;
}

/// Retry schedule: up to `max_attempts` tries with exponentially growing
/// delays between them.
#[derive(Debug, Clone, Copy)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    /// Delay before retrying after the given 1-based failed attempt:
    /// `base * 2^(attempt-1)`.
    pub fn delay_after(&self, attempt: u32) -> Duration {
        self.base_delay * 2u32.saturating_pow(attempt.saturating_sub(1))
    }
}

/// Token bucket limiting request throughput.
///
/// The bucket starts full; each acquisition spends one token and tokens
/// refill continuously at `refill_per_sec`.
#[derive(Debug)]
pub struct TokenBucket {
    capacity: f64,
    refill_per_sec: f64,
    state: Mutex<BucketState>,
}

#[derive(Debug)]
struct BucketState {
    tokens: f64,
    last_refill: Instant,
}

impl TokenBucket {
    pub fn new(capacity: u32, refill_per_sec: f64) -> Result<Self, ProviderError> {
        if capacity == 0 || refill_per_sec <= 0.0 || !refill_per_sec.is_finite() {
            return Err(ProviderError::Config(
                "token bucket needs capacity >= 1 and a positive refill rate".to_string(),
            ));
        }
        Ok(TokenBucket {
            capacity: capacity as f64,
            refill_per_sec,
            state: Mutex::new(BucketState {
                tokens: capacity as f64,
                last_refill: Instant::now(),
            }),
        })
    }

    /// Takes a token, or reports how long to wait for one.
    pub fn try_take(&self) -> Result<(), Duration> {
        let mut state = self.state.lock().expect("bucket lock");
        let now = Instant::now();
        let elapsed = now.duration_since(state.last_refill).as_secs_f64();
        state.tokens = (state.tokens + elapsed * self.refill_per_sec).min(self.capacity);
        state.last_refill = now;
        if state.tokens >= 1.0 {
            state.tokens -= 1.0;
            Ok(())
        } else {
            let deficit = 1.0 - state.tokens;
            Err(Duration::from_secs_f64(deficit / self.refill_per_sec))
        }
    }

    /// Blocks (via the supplied sleeper) until a token is available.
    pub fn acquire(&self, sleep: fn(Duration)) {
        loop {
            match self.try_take() {
                Ok(()) => return,
                Err(wait) => sleep(wait),
            }
        }
    }
}

/// Wraps a provider with retry and optional rate limiting.
///
/// The sleeper is injectable so tests run without real delays.
pub struct Throttled<P> {
    inner: P,
    policy: RetryPolicy,
    limiter: Option<TokenBucket>,
    sleep: fn(Duration),
}

impl<P: TextProvider> Throttled<P> {
    pub fn new(inner: P, policy: RetryPolicy, limiter: Option<TokenBucket>) -> Self {
        Throttled {
            inner,
            policy,
            limiter,
            sleep: std::thread::sleep,
        }
    }

    pub fn with_sleeper(mut self, sleep: fn(Duration)) -> Self {
        self.sleep = sleep;
        self
    }
}

impl<P: TextProvider> TextProvider for Throttled<P> {
    fn complete(&self, prompt: &str) -> Result<String, ProviderError> {
        let attempts = self.policy.max_attempts.max(1);
        let mut last = String::new();
        for attempt in 1..=attempts {
            if let Some(limiter) = &self.limiter {
                limiter.acquire(self.sleep);
            }
            match self.inner.complete(prompt) {
                Ok(text) => return Ok(text),
                Err(err) => {
                    last = err.to_string();
                    if attempt < attempts {
                        (self.sleep)(self.policy.delay_after(attempt));
                    }
                }
            }
        }
        Err(ProviderError::Exhausted { attempts, last })
    }
}

/// Deterministic stand-in for a hosted text model.
///
/// The mock reads the grade label and sentence-length cap out of the prompt
/// and synthesizes text pitched at that band, seeded by the prompt bytes,
/// so equal (seed, prompt) pairs always produce identical output.
#[derive(Debug, Clone)]
pub struct MockProvider {
    seed: u64,
}

impl MockProvider {
    pub fn new(seed: u64) -> Self {
        MockProvider { seed }
    }
}

const GRADE_HINTS: [(&str, u8); 6] = [
    ("1st grade", 1),
    ("3rd grade", 2),
    ("5th grade", 3),
    ("7th grade", 4),
    ("10th grade", 5),
    ("college", 6),
];

fn band_hint(prompt: &str) -> Option<GradeBand> {
    GRADE_HINTS
        .iter()
        .find(|(hint, _)| prompt.contains(hint))
        .map(|(_, band)| GradeBand::new(*band).expect("hint bands are valid"))
}

fn cap_hint(prompt: &str) -> Option<usize> {
    let tail = prompt.split("maximum of ").nth(1)?;
    let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits.parse().ok()
}

impl TextProvider for MockProvider {
    fn complete(&self, prompt: &str) -> Result<String, ProviderError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(prompt.as_bytes()));
        if let Some(count) = question_count_hint(prompt) {
            return Ok(synth::question_lines(count, &mut rng));
        }
        let band = band_hint(prompt).unwrap_or(GradeBand::new(3).expect("3 is a band"));
        let text = synth::text_for_band(band, 6, cap_hint(prompt), &mut rng);
        Ok(text)
    }
}

fn question_count_hint(prompt: &str) -> Option<usize> {
    let tail = prompt.strip_prefix("Generate ")?;
    let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
    if tail[digits.len()..].trim_start().starts_with("question") {
        digits.parse().ok()
    } else {
        None
    }
}
