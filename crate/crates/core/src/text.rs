//! Sentence segmentation, word tokenization, syllable counting, and the
//! aggregate text statistics every readability formula reads from.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lists::WordLists;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("text contains no word tokens")]
    EmptyText,
    #[error("{0:?} contains no letters")]
    NotAWord(String),
}

/// Counts shared by all readability formulas, computed in a single pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextStats {
    /// Sentences found by rule-based segmentation; always at least one.
    pub sentence_count: usize,
    /// Word tokens across all sentences; always at least one.
    pub word_count: usize,
    /// Total syllables; numbers-only tokens count one syllable each.
    pub syllable_count: usize,
    /// Letters and digits inside word tokens.
    pub character_count: usize,
    /// Letters only, for the Coleman-Liau index.
    pub letter_count: usize,
    /// Words of three or more syllables (Gunning fog's "complex" words).
    pub complex_word_count: usize,
    /// Words of one or two syllables (Linsear Write's "easy" words).
    pub easy_word_count: usize,
    /// Words of three or more syllables (Linsear Write's "hard" words).
    pub hard_word_count: usize,
    /// Word occurrences not familiar per the Dale-Chall list.
    pub dale_chall_difficult_count: usize,
    /// Percentage of words not familiar per the Dale-Chall list.
    pub dale_chall_difficult_pct: f64,
    /// Percentage of unique words not familiar per the Spache list.
    pub spache_unfamiliar_pct: f64,
}

impl TextStats {
    /// Checks the relations the single-pass computation guarantees; useful
    /// when stats are constructed by hand.
    pub fn validate(&self) -> Result<(), TextError> {
        if self.sentence_count == 0 || self.word_count == 0 {
            return Err(TextError::EmptyText);
        }
        debug_assert!(self.syllable_count >= self.word_count);
        debug_assert_eq!(self.easy_word_count + self.hard_word_count, self.word_count);
        debug_assert_eq!(self.complex_word_count, self.hard_word_count);
        debug_assert!(self.dale_chall_difficult_count <= self.word_count);
        debug_assert!(self.letter_count <= self.character_count);
        Ok(())
    }
}

/// Splits text into sentences.
///
/// A sentence ends at `.`, `!`, or `?` unless the period closes a known
/// abbreviation or sits between two digits. Runs of terminators (`?!`,
/// `...`) end one sentence, and trailing quotes or brackets stay attached.
/// Trailing text without a terminator forms a final sentence when it holds
/// at least one word token; segments without word tokens are dropped.
///
/// Returns [`TextError::EmptyText`] when no sentence with a word token
/// remains.
pub fn segment_sentences(text: &str, lists: &WordLists) -> Result<Vec<String>, TextError> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '!' || c == '?' || (c == '.' && is_sentence_period(&chars, i, lists)) {
            // absorb the full terminator run plus any closing punctuation
            let mut end = i + 1;
            while end < chars.len() && matches!(chars[end], '.' | '!' | '?') {
                end += 1;
            }
            while end < chars.len() && matches!(chars[end], '"' | '\'' | '\u{201d}' | '\u{2019}' | ')' | ']') {
                end += 1;
            }
            push_segment(&chars[start..end], &mut sentences);
            start = end;
            i = end;
        } else {
            i += 1;
        }
    }
    push_segment(&chars[start..], &mut sentences);
    if sentences.is_empty() {
        return Err(TextError::EmptyText);
    }
    Ok(sentences)
}

fn push_segment(segment: &[char], sentences: &mut Vec<String>) {
    if segment.iter().any(|c| c.is_alphanumeric()) {
        sentences.push(segment.iter().collect::<String>().trim().to_string());
    }
}

/// Whether the period at `chars[i]` ends a sentence rather than an
/// abbreviation, a decimal number, or a dotted sequence like `U.S.A.`.
fn is_sentence_period(chars: &[char], i: usize, lists: &WordLists) -> bool {
    // a period glued to a following letter or digit never ends a sentence;
    // this covers decimals ("3.14") and interior dots ("e.g.", "U.S.A.")
    if chars.get(i + 1).is_some_and(|c| c.is_alphanumeric()) {
        return false;
    }
    // walk back over the attached word (letters and interior periods) and
    // test it against the abbreviation set
    let mut j = i;
    while j > 0 && (chars[j - 1].is_alphabetic() || chars[j - 1] == '.') {
        j -= 1;
    }
    if j == i {
        return true;
    }
    let word: String = chars[j..i].iter().collect();
    let word = word.trim_matches('.');
    word.is_empty() || !lists.is_abbreviation(word)
}

/// Splits a sentence into word tokens.
///
/// A token is a maximal run of letters and digits, where apostrophes and
/// hyphens join the run when flanked by letters or digits, and a period
/// joins when flanked by digits (so `3.14` stays one token). Curly
/// apostrophes are normalized to `'`.
pub fn tokenize_words(sentence: &str) -> Vec<String> {
    let chars: Vec<char> = sentence.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            current.push(c);
            continue;
        }
        let prev = i.checked_sub(1).and_then(|p| chars.get(p));
        let next = chars.get(i + 1);
        let joins = match c {
            '\'' | '\u{2019}' | '-' => {
                prev.is_some_and(|p| p.is_alphanumeric()) && next.is_some_and(|n| n.is_alphanumeric())
            }
            '.' => {
                prev.is_some_and(|p| p.is_ascii_digit()) && next.is_some_and(|n| n.is_ascii_digit())
            }
            _ => false,
        };
        if joins && !current.is_empty() {
            current.push(if c == '\u{2019}' { '\'' } else { c });
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Counts syllables in a word by vowel-group counting.
///
/// Maximal runs of `a e i o u y` (case-insensitive) each count one syllable;
/// one is subtracted for a silent final `e` (but not a final `le`), and the
/// count never drops below one. Words without letters are rejected.
pub fn count_syllables(word: &str) -> Result<usize, TextError> {
    if !word.chars().any(char::is_alphabetic) {
        return Err(TextError::NotAWord(word.to_string()));
    }
    let lowered = word.to_lowercase();
    let mut groups = 0usize;
    let mut in_group = false;
    for c in lowered.chars() {
        let vowel = matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
        if vowel && !in_group {
            groups += 1;
        }
        in_group = vowel;
    }
    if lowered.ends_with('e') && !lowered.ends_with("le") {
        groups = groups.saturating_sub(1);
    }
    Ok(groups.max(1))
}

/// Syllables for a token that may be numbers-only; such tokens count one.
fn token_syllables(token: &str) -> usize {
    count_syllables(token).unwrap_or(1)
}

/// Computes all counts the readability formulas need in one pass.
pub fn compute_text_stats(text: &str, lists: &WordLists) -> Result<TextStats, TextError> {
    let sentences = segment_sentences(text, lists)?;
    let mut stats = TextStats {
        sentence_count: 0,
        word_count: 0,
        syllable_count: 0,
        character_count: 0,
        letter_count: 0,
        complex_word_count: 0,
        easy_word_count: 0,
        hard_word_count: 0,
        dale_chall_difficult_count: 0,
        dale_chall_difficult_pct: 0.0,
        spache_unfamiliar_pct: 0.0,
    };
    let mut unique = std::collections::HashSet::new();
    let mut unique_unfamiliar = 0usize;
    for sentence in &sentences {
        let tokens = tokenize_words(sentence);
        if tokens.is_empty() {
            continue;
        }
        stats.sentence_count += 1;
        for token in tokens {
            stats.word_count += 1;
            let syllables = token_syllables(&token);
            stats.syllable_count += syllables;
            stats.character_count += token.chars().filter(|c| c.is_alphanumeric()).count();
            stats.letter_count += token.chars().filter(|c| c.is_alphabetic()).count();
            if syllables >= 3 {
                stats.complex_word_count += 1;
                stats.hard_word_count += 1;
            } else {
                stats.easy_word_count += 1;
            }
            if !lists.is_dale_chall_familiar(&token) {
                stats.dale_chall_difficult_count += 1;
            }
            if unique.insert(token.to_lowercase()) && !lists.is_spache_familiar(&token) {
                unique_unfamiliar += 1;
            }
        }
    }
    if stats.word_count == 0 {
        return Err(TextError::EmptyText);
    }
    stats.dale_chall_difficult_pct =
        100.0 * stats.dale_chall_difficult_count as f64 / stats.word_count as f64;
    stats.spache_unfamiliar_pct = 100.0 * unique_unfamiliar as f64 / unique.len() as f64;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists() -> WordLists {
        WordLists::bundled()
    }

    #[test]
    fn segments_plain_sentences() {
        let out = segment_sentences("The cat sat. The dog ran! Did it rain?", &lists()).unwrap();
        assert_eq!(out, vec!["The cat sat.", "The dog ran!", "Did it rain?"]);
    }

    #[test]
    fn abbreviations_do_not_split() {
        let out = segment_sentences("Dr. Smith saw Mr. Jones. They left.", &lists()).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0], "Dr. Smith saw Mr. Jones.");
    }

    #[test]
    fn decimals_do_not_split() {
        let out = segment_sentences("Pi is about 3.14 in value. It is handy.", &lists()).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[0].contains("3.14"));
    }

    #[test]
    fn terminator_runs_collapse() {
        let out = segment_sentences("Really?! Yes... absolutely.", &lists()).unwrap();
        assert_eq!(out, vec!["Really?!", "Yes...", "absolutely."]);
    }

    #[test]
    fn trailing_text_counts_as_sentence() {
        let out = segment_sentences("First one. and then more", &lists()).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[1], "and then more");
    }

    #[test]
    fn wordless_text_is_rejected() {
        assert_eq!(segment_sentences("?!  ... --", &lists()), Err(TextError::EmptyText));
        assert_eq!(segment_sentences("", &lists()), Err(TextError::EmptyText));
    }

    #[test]
    fn closing_quotes_stay_attached() {
        let out = segment_sentences("\"Stop!\" she said.", &lists()).unwrap();
        assert_eq!(out, vec!["\"Stop!\"", "she said."]);
    }

    #[test]
    fn tokenizer_keeps_contractions_hyphens_decimals() {
        assert_eq!(
            tokenize_words("Don't over-react to 3.14, okay?"),
            vec!["Don't", "over-react", "to", "3.14", "okay"]
        );
    }

    #[test]
    fn tokenizer_drops_edge_punctuation() {
        assert_eq!(tokenize_words("'tis -- well- (said)"), vec!["tis", "well", "said"]);
        assert_eq!(tokenize_words("end."), vec!["end"]);
        assert!(tokenize_words("?? !!").is_empty());
    }

    #[test]
    fn syllables_match_known_words() {
        for (word, expect) in [
            ("cat", 1),
            ("the", 1),
            ("see", 1),
            ("banana", 3),
            ("cake", 1),
            ("table", 2),
            ("readability", 5),
            ("strengths", 1),
            ("YELLING", 2),
        ] {
            assert_eq!(count_syllables(word).unwrap(), expect, "{word}");
        }
    }

    #[test]
    fn syllables_reject_letterless_tokens() {
        assert_eq!(
            count_syllables("3.14"),
            Err(TextError::NotAWord("3.14".to_string()))
        );
    }

    #[test]
    fn stats_for_fixture_sentence() {
        let stats = compute_text_stats("The cat sat on the mat.", &lists()).unwrap();
        assert_eq!(stats.sentence_count, 1);
        assert_eq!(stats.word_count, 6);
        assert_eq!(stats.syllable_count, 6);
        assert_eq!(stats.character_count, 17);
        assert_eq!(stats.letter_count, 17);
        assert_eq!(stats.complex_word_count, 0);
        assert_eq!(stats.easy_word_count, 6);
        assert_eq!(stats.hard_word_count, 0);
        assert_eq!(stats.dale_chall_difficult_count, 0);
        assert_eq!(stats.dale_chall_difficult_pct, 0.0);
        assert_eq!(stats.spache_unfamiliar_pct, 0.0);
        stats.validate().unwrap();
    }

    #[test]
    fn stats_count_difficult_and_unfamiliar() {
        // "zygote" is on neither list; "the" repeats so unique counts differ
        let stats = compute_text_stats("The zygote grew. The cat ran.", &lists()).unwrap();
        assert_eq!(stats.sentence_count, 2);
        assert_eq!(stats.word_count, 6);
        assert_eq!(stats.dale_chall_difficult_count, 1);
        // unique tokens: the, zygote, grew, cat, ran -> 1 of 5 unfamiliar
        assert!((stats.spache_unfamiliar_pct - 20.0).abs() < 1e-9);
    }

    #[test]
    fn numbers_count_one_syllable_and_stay_easy() {
        let stats = compute_text_stats("It costs 1234 dollars.", &lists()).unwrap();
        assert_eq!(stats.word_count, 4);
        // it=1 costs=1 1234=1 dollars=2
        assert_eq!(stats.syllable_count, 5);
        assert_eq!(stats.complex_word_count, 0);
    }
}
