//! Text normalization, tokenization, and stemming.
//!
//! Normalization folds the six Turkish diacritic letters to their ASCII
//! counterparts (both cases), lowercases, and turns punctuation into token
//! boundaries. Stemming is pluggable: the built-ins are an identity stemmer
//! and a longest-match suffix stripper driven by a suffix list file.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{io_err, Result};

/// The exact diacritic fold map: six lowercase pairs plus their uppercase
/// forms. Every other character passes through unchanged.
const FOLD: [(char, char); 12] = [
    ('ç', 'c'),
    ('ğ', 'g'),
    ('ı', 'i'),
    ('ö', 'o'),
    ('ş', 's'),
    ('ü', 'u'),
    ('Ç', 'c'),
    ('Ğ', 'g'),
    ('İ', 'i'),
    ('Ö', 'o'),
    ('Ş', 's'),
    ('Ü', 'u'),
];

fn fold_char(c: char) -> char {
    for &(from, to) in &FOLD {
        if c == from {
            return to;
        }
    }
    c
}

/// Normalize raw text: fold Turkish diacritics, lowercase, replace
/// punctuation with spaces, collapse whitespace. Total and idempotent.
pub fn normalize(text: &str) -> String {
    let lowered = text.chars().map(fold_char).flat_map(char::to_lowercase);
    let spaced = lowered.map(|c| if c.is_alphanumeric() { c } else { ' ' });

    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in spaced {
        if c == ' ' {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

/// Reduces a token to its stem.
pub trait Stemmer: Send + Sync {
    fn stem(&self, token: &str) -> String;
}

/// Leaves tokens untouched.
#[derive(Debug, Clone, Default)]
pub struct IdentityStemmer;

impl Stemmer for IdentityStemmer {
    fn stem(&self, token: &str) -> String {
        token.to_string()
    }
}

/// Strips the single longest matching suffix from its configured list.
/// A token that equals one of the suffixes strips to empty and is later
/// dropped by [`tokenize_filter`].
#[derive(Debug, Clone)]
pub struct SuffixStemmer {
    /// Sorted longest-first so the first match wins.
    suffixes: Vec<String>,
}

impl SuffixStemmer {
    pub fn new(mut suffixes: Vec<String>) -> Self {
        suffixes.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        suffixes.dedup();
        SuffixStemmer { suffixes }
    }

    /// One suffix per line; `#` lines and blank lines ignored.
    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(SuffixStemmer::new(read_term_lines(path)?))
    }
}

impl Stemmer for SuffixStemmer {
    fn stem(&self, token: &str) -> String {
        for suffix in &self.suffixes {
            if let Some(stem) = token.strip_suffix(suffix.as_str()) {
                return stem.to_string();
            }
        }
        token.to_string()
    }
}

/// Split normalized text on whitespace, drop stopwords and noise words,
/// stem the survivors, and drop tokens that stem to empty.
pub fn tokenize_filter(
    text: &str,
    stopwords: &HashSet<String>,
    noise_words: &HashSet<String>,
    stemmer: &dyn Stemmer,
) -> Vec<String> {
    text.split_whitespace()
        .filter(|t| !stopwords.contains(*t) && !noise_words.contains(*t))
        .map(|t| stemmer.stem(t))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Load a one-term-per-line word list (stopwords, noise words).
/// Lines starting with `#` and blank lines are ignored; terms are expected
/// already normalized.
pub fn read_term_set(path: &Path) -> Result<HashSet<String>> {
    Ok(read_term_lines(path)?.into_iter().collect())
}

fn read_term_lines(path: &Path) -> Result<Vec<String>> {
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}
