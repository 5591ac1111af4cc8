//! Dictionary-category features: per-category word counts normalized by
//! document length.
//!
//! The shipped placeholder dictionary covers the seven influence categories
//! (anxiety, anger, sad, time, reward, risk, money) with the published
//! example keywords; licensed users can load a full dictionary in the
//! standard `.dic` format instead.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::TokenStream;
use crate::stem::stem_word;

/// The bundled placeholder dictionary (JSON category -> patterns).
pub const PLACEHOLDER_LEXICON: &str = include_str!("../assets/influence.json");

/// A dictionary entry: an exact stem, or a prefix when the source pattern
/// carried a trailing `*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pattern {
    Exact(String),
    Prefix(String),
}

impl Pattern {
    /// Parses a lowercase pattern; exact words are stemmed so that matching
    /// runs stem against stem, prefixes are kept verbatim.
    fn parse(raw: &str) -> Result<Pattern> {
        let raw = raw.trim().to_lowercase();
        let (body, wildcard) = match raw.strip_suffix('*') {
            Some(body) => (body, true),
            None => (raw.as_str(), false),
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(Error::Config(format!("invalid lexicon pattern: {raw:?}")));
        }
        Ok(if wildcard {
            Pattern::Prefix(body.to_string())
        } else {
            Pattern::Exact(stem_word(body))
        })
    }

    fn matches(&self, token: &str) -> bool {
        match self {
            Pattern::Exact(stem) => token == stem,
            Pattern::Prefix(prefix) => token.starts_with(prefix.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    pub patterns: Vec<Pattern>,
}

/// An ordered set of dictionary categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub categories: Vec<Category>,
}

/// Normalized per-category densities for one document, aligned to the
/// lexicon's category order. Each value is `n_{i,d} / m_d`, in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconFeatures {
    pub values: Vec<f64>,
}

impl Lexicon {
    pub fn from_entries(entries: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut categories = Vec::with_capacity(entries.len());
        let mut seen = std::collections::HashSet::new();
        for (name, patterns) in entries {
            if !seen.insert(name.clone()) {
                return Err(Error::Config(format!("duplicate lexicon category: {name}")));
            }
            let patterns = patterns
                .iter()
                .map(|p| Pattern::parse(p))
                .collect::<Result<Vec<_>>>()?;
            categories.push(Category { name, patterns });
        }
        if categories.is_empty() {
            return Err(Error::Config("lexicon has no categories".into()));
        }
        Ok(Lexicon { categories })
    }

    /// The bundled seven-category placeholder.
    pub fn placeholder() -> Self {
        Lexicon::from_json_str(PLACEHOLDER_LEXICON).expect("bundled lexicon parses")
    }

    /// Native JSON format: an object of category -> array of patterns,
    /// categories ordered as written.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let map = value
            .as_object()
            .ok_or_else(|| Error::Config("lexicon JSON must be an object".into()))?;
        let mut entries = Vec::new();
        for (name, patterns) in map {
            let list = patterns
                .as_array()
                .ok_or_else(|| Error::Config(format!("category {name} must be an array")))?
                .iter()
                .map(|p| {
                    p.as_str()
                        .map(String::from)
                        .ok_or_else(|| Error::Config(format!("non-string pattern in {name}")))
                })
                .collect::<Result<Vec<_>>>()?;
            entries.push((name.clone(), list));
        }
        Lexicon::from_entries(entries)
    }

    /// Standard `.dic` format: a `%`-delimited header of `id<TAB>name`
    /// lines, then `word<TAB>id...` entries.
    pub fn from_dic_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mut header: BTreeMap<u32, String> = BTreeMap::new();
        let mut in_header = false;
        let mut body_start = 0;
        for (lineno, line) in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "%" {
                if in_header {
                    body_start = lineno + 1;
                    break;
                }
                in_header = true;
                continue;
            }
            if !in_header {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "expected `%` header delimiter".into(),
                });
            }
            let mut parts = line.split_whitespace();
            let id: u32 = parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    message: "expected numeric category id".into(),
                })?;
            let name = parts.next().ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: "expected category name".into(),
            })?;
            header.insert(id, name.to_lowercase());
        }
        if header.is_empty() {
            return Err(Error::Config(".dic file has no category header".into()));
        }
        let mut by_category: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate().skip(body_start) {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().unwrap().to_lowercase();
            for id_str in parts {
                let id: u32 = id_str.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("bad category id {id_str:?}"),
                })?;
                if !header.contains_key(&id) {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("undeclared category id {id}"),
                    });
                }
                by_category.entry(id).or_default().push(word.clone());
            }
        }
        let entries = header
            .into_iter()
            .map(|(id, name)| (name, by_category.remove(&id).unwrap_or_default()))
            .collect();
        Lexicon::from_entries(entries)
    }

    /// Loads `.dic` or JSON depending on the file extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        if path.extension().map(|e| e == "dic").unwrap_or(false) {
            Lexicon::from_dic_str(&text)
        } else {
            Lexicon::from_json_str(&text)
        }
    }

    pub fn category_names(&self) -> Vec<String> {
        self.categories.iter().map(|c| c.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    fn category(&self, name: &str) -> Result<&Category> {
        self.categories
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCategory(name.to_string()))
    }

    /// Number of tokens matching any pattern of `category`. A token that
    /// matches several patterns of the same category still counts once.
    pub fn match_count(&self, tokens: &TokenStream, category: &str) -> Result<usize> {
        let cat = self.category(category)?;
        Ok(tokens
            .iter()
            .filter(|tok| cat.patterns.iter().any(|p| p.matches(tok)))
            .count())
    }

    /// `values[i] = n_{i,d} / m_d` per category; an all-zero vector when the
    /// document is empty.
    pub fn extract_features(&self, tokens: &TokenStream) -> LexiconFeatures {
        let m_d = tokens.len();
        if m_d == 0 {
            return LexiconFeatures {
                values: vec![0.0; self.len()],
            };
        }
        let values = self
            .categories
            .iter()
            .map(|cat| {
                let n = tokens
                    .iter()
                    .filter(|tok| cat.patterns.iter().any(|p| p.matches(tok)))
                    .count();
                n as f64 / m_d as f64
            })
            .collect();
        LexiconFeatures { values }
    }
}
