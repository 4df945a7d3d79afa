//! Familiar-word lists and sentence-boundary abbreviations.
//!
//! Two word lists drive the vocabulary-based formulas: the Dale-Chall list of
//! roughly three thousand words familiar to fourth graders, and the revised
//! Spache list of roughly one thousand primary-grade words. Both ship bundled
//! with the crate and can be replaced from files at runtime.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ListError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: bad entry {entry:?}: {reason}")]
    BadEntry {
        path: String,
        line: usize,
        entry: String,
        reason: &'static str,
    },
}

const DALE_CHALL: &str = include_str!("../data/dale_chall.txt");
const SPACHE: &str = include_str!("../data/spache.txt");
const ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

/// The word lists and abbreviation set used for scoring and segmentation.
#[derive(Debug, Clone)]
pub struct WordLists {
    dale_chall: HashSet<String>,
    spache: HashSet<String>,
    abbreviations: HashSet<String>,
}

impl WordLists {
    /// The lists bundled with the crate.
    pub fn bundled() -> Self {
        WordLists {
            dale_chall: parse_list(DALE_CHALL, "<bundled dale_chall>").expect("bundled list"),
            spache: parse_list(SPACHE, "<bundled spache>").expect("bundled list"),
            abbreviations: parse_list(ABBREVIATIONS, "<bundled abbreviations>")
                .expect("bundled list"),
        }
    }

    /// Loads replacement word lists from files; the bundled abbreviation set
    /// is kept.
    ///
    /// List files hold one lowercase word per line; blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_paths(dale_chall: &Path, spache: &Path) -> Result<Self, ListError> {
        let mut lists = WordLists::bundled();
        lists.dale_chall = parse_list(&read(dale_chall)?, &dale_chall.display().to_string())?;
        lists.spache = parse_list(&read(spache)?, &spache.display().to_string())?;
        Ok(lists)
    }

    /// Whether a token counts as familiar against the Dale-Chall list.
    ///
    /// The token is lowercased before lookup. Numbers-only tokens are always
    /// familiar. Hyphenated tokens are looked up whole first; if that misses,
    /// the token is familiar when any hyphen-separated part is on the list.
    pub fn is_dale_chall_familiar(&self, token: &str) -> bool {
        is_familiar(&self.dale_chall, token)
    }

    /// Whether a token counts as familiar against the Spache list, under the
    /// same rules as [`WordLists::is_dale_chall_familiar`].
    pub fn is_spache_familiar(&self, token: &str) -> bool {
        is_familiar(&self.spache, token)
    }

    /// Whether a word (lowercased, no trailing period) is a known
    /// abbreviation that should not end a sentence.
    pub fn is_abbreviation(&self, word: &str) -> bool {
        self.abbreviations.contains(&word.to_lowercase())
    }

    pub fn dale_chall_len(&self) -> usize {
        self.dale_chall.len()
    }

    pub fn spache_len(&self) -> usize {
        self.spache.len()
    }
}

fn read(path: &Path) -> Result<String, ListError> {
    fs::read_to_string(path).map_err(|source| ListError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_list(raw: &str, path: &str) -> Result<HashSet<String>, ListError> {
    let mut out = HashSet::new();
    for (idx, line) in raw.lines().enumerate() {
        let entry = line.trim();
        if entry.is_empty() || entry.starts_with('#') {
            continue;
        }
        let bad = |reason| ListError::BadEntry {
            path: path.to_string(),
            line: idx + 1,
            entry: entry.to_string(),
            reason,
        };
        if entry.chars().any(char::is_whitespace) {
            return Err(bad("contains whitespace"));
        }
        if entry.chars().any(char::is_uppercase) {
            return Err(bad("must be lowercase"));
        }
        out.insert(entry.to_string());
    }
    Ok(out)
}

fn is_familiar(list: &HashSet<String>, token: &str) -> bool {
    let lowered = token.to_lowercase();
    if !lowered.is_empty() && lowered.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return true;
    }
    if list.contains(&lowered) {
        return true;
    }
    lowered.contains('-')
        && lowered
            .split('-')
            .any(|part| !part.is_empty() && list.contains(part))
}
