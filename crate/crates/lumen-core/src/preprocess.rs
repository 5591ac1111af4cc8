//! Text cleaning, tokenization, stopword removal, stemming, and the
//! short-document filter.
//!
//! Two token paths feed the feature extractors: dictionary matching uses
//! cleaned + stemmed tokens with stopwords retained, while topic modeling
//! additionally removes stopwords before stemming. Sentiment scoring reads
//! the raw text and is not handled here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::stem::stem_word;

/// The pinned English stopword list shipped with the crate (127 words).
pub const STOPWORDS_EN: &str = include_str!("../assets/stopwords_en.txt");

/// An ordered list of cleaned lowercase tokens for one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn new(tokens: Vec<String>) -> Self {
        TokenStream { tokens }
    }

    /// Document length `m_d`.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.tokens.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    /// Documents with fewer cleaned tokens than this are dropped.
    pub min_doc_tokens: usize,
    /// Words removed on the topic-modeling path.
    pub stopwords: BTreeSet<String>,
    pub stem: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            min_doc_tokens: 10,
            stopwords: builtin_stopwords(),
            stem: true,
        }
    }
}

/// Parses a one-word-per-line stopword asset; `#` lines are comments.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

pub fn builtin_stopwords() -> BTreeSet<String> {
    parse_stopwords(STOPWORDS_EN)
}

/// Lowercases, strips punctuation, digits and special characters, and drops
/// tokens shorter than three letters.
///
/// The input is NFKC-normalized first; any non-ASCII-letter character then
/// acts as a token separator, so the output tokens always match `[a-z]{3,}`.
pub fn clean_tokenize(raw_text: &str) -> TokenStream {
    let normalized: String = raw_text.nfkc().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in normalized.chars() {
        if ch.is_ascii_alphabetic() {
            current.push(ch.to_ascii_lowercase());
        } else if !current.is_empty() {
            if current.len() >= 3 {
                tokens.push(std::mem::take(&mut current));
            } else {
                current.clear();
            }
        }
    }
    if current.len() >= 3 {
        tokens.push(current);
    }
    TokenStream::new(tokens)
}

/// Drops every token present in `stopwords`, preserving order.
pub fn remove_stopwords(stream: &TokenStream, stopwords: &BTreeSet<String>) -> TokenStream {
    TokenStream::new(
        stream
            .tokens
            .iter()
            .filter(|t| !stopwords.contains(t.as_str()))
            .cloned()
            .collect(),
    )
}

/// Replaces each token with its Porter stem.
pub fn stem(stream: &TokenStream) -> TokenStream {
    TokenStream::new(stream.tokens.iter().map(|t| stem_word(t)).collect())
}

/// Retains streams with at least `min_doc_tokens` tokens.
///
/// Returns the indices of kept streams and the indices of dropped ones,
/// both in input order.
pub fn filter_short(streams: &[TokenStream], min_doc_tokens: usize) -> (Vec<usize>, Vec<usize>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, s) in streams.iter().enumerate() {
        if s.len() >= min_doc_tokens {
            kept.push(i);
        } else {
            dropped.push(i);
        }
    }
    (kept, dropped)
}
