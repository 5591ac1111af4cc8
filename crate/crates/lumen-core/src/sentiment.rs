//! Rule-based valence scoring.
//!
//! A lexicon lookup per token plus the usual heuristics: negation within a
//! three-token window, booster words, all-caps emphasis, and exclamation
//! marks. Produces the positive/negative/neutral shares and a compound
//! score in (-1, 1). The heuristic constants live in [`Heuristics`] so they
//! can be varied for sensitivity runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The bundled valence word list.
pub const BUNDLED_VALENCES: &str = include_str!("../assets/valence.txt");

const BOOSTERS_INCR: &[&str] = &[
    "absolutely",
    "completely",
    "considerably",
    "decidedly",
    "deeply",
    "enormously",
    "entirely",
    "especially",
    "exceptionally",
    "extremely",
    "greatly",
    "highly",
    "hugely",
    "incredibly",
    "intensely",
    "majorly",
    "particularly",
    "purely",
    "quite",
    "really",
    "remarkably",
    "so",
    "substantially",
    "thoroughly",
    "totally",
    "tremendously",
    "unbelievably",
    "unusually",
    "utterly",
    "very",
];

const BOOSTERS_DECR: &[&str] = &[
    "almost",
    "barely",
    "hardly",
    "kinda",
    "kind",
    "less",
    "little",
    "marginally",
    "occasionally",
    "partly",
    "scarcely",
    "slightly",
    "somewhat",
    "sort",
    "sorta",
];

const NEGATIONS: &[&str] = &[
    "aint",
    "ain't",
    "arent",
    "aren't",
    "cannot",
    "cant",
    "can't",
    "couldnt",
    "couldn't",
    "didnt",
    "didn't",
    "doesnt",
    "doesn't",
    "dont",
    "don't",
    "hardly",
    "hasnt",
    "hasn't",
    "havent",
    "haven't",
    "isnt",
    "isn't",
    "neither",
    "never",
    "no",
    "nobody",
    "none",
    "nor",
    "not",
    "nothing",
    "nowhere",
    "rarely",
    "seldom",
    "shouldnt",
    "shouldn't",
    "wasnt",
    "wasn't",
    "werent",
    "weren't",
    "without",
    "wont",
    "won't",
    "wouldnt",
    "wouldn't",
];

/// Tunable rule constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heuristics {
    /// Normalization constant: compound = s / sqrt(s^2 + alpha).
    pub alpha: f64,
    /// Multiplier applied to a valence negated within the window.
    pub negation_damp: f64,
    /// Added to |valence| for an all-caps token in mixed-case text.
    pub caps_boost: f64,
    /// Added per exclamation mark, up to `max_exclamations`.
    pub exclamation_incr: f64,
    pub max_exclamations: usize,
    /// Base booster increment; dampeners use the negated value.
    pub booster_incr: f64,
    /// Distance decay for boosters one, two, three tokens back.
    pub booster_decay: [f64; 3],
}

impl Default for Heuristics {
    fn default() -> Self {
        Heuristics {
            alpha: 15.0,
            negation_damp: -0.74,
            caps_boost: 0.733,
            exclamation_incr: 0.292,
            max_exclamations: 3,
            booster_incr: 0.293,
            booster_decay: [1.0, 0.95, 0.9],
        }
    }
}

/// Valence lexicon plus booster and negation word lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    pub valences: BTreeMap<String, f64>,
    pub boosters: BTreeMap<String, f64>,
    pub negations: BTreeSet<String>,
    pub heuristics: Heuristics,
}

impl SentimentLexicon {
    /// The bundled lexicon with default heuristics.
    pub fn bundled() -> Self {
        let valences = parse_valence_list(BUNDLED_VALENCES).expect("bundled valence list parses");
        SentimentLexicon::with_valences(valences)
    }

    pub fn with_valences(valences: BTreeMap<String, f64>) -> Self {
        let h = Heuristics::default();
        let mut boosters = BTreeMap::new();
        for w in BOOSTERS_INCR {
            boosters.insert(w.to_string(), h.booster_incr);
        }
        for w in BOOSTERS_DECR {
            boosters.insert(w.to_string(), -h.booster_incr);
        }
        SentimentLexicon {
            valences,
            boosters,
            negations: NEGATIONS.iter().map(|s| s.to_string()).collect(),
            heuristics: h,
        }
    }

    /// Loads a tab-separated valence file (word, mean valence, rest
    /// ignored); booster and negation lists stay at the built-in defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(SentimentLexicon::with_valences(parse_valence_list(&text)?))
    }

    /// Returns a copy with every valence sign flipped.
    pub fn negated(&self) -> Self {
        let mut flipped = self.clone();
        for v in flipped.valences.values_mut() {
            *v = -*v;
        }
        flipped
    }
}

fn parse_valence_list(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let word = parts.next().unwrap().trim().to_lowercase();
        let valence: f64 = parts
            .next()
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: format!("expected `word<TAB>valence`, got {line:?}"),
            })?;
        if !valence.is_finite() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "non-finite valence".into(),
            });
        }
        map.insert(word, valence);
    }
    Ok(map)
}

/// Positive, negative, and neutral shares plus the normalized compound
/// score. The three shares sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentScores {
    pub pos: f64,
    pub neg: f64,
    pub neu: f64,
    pub compound: f64,
}

impl SentimentScores {
    pub fn neutral() -> Self {
        SentimentScores {
            pos: 0.0,
            neg: 0.0,
            neu: 1.0,
            compound: 0.0,
        }
    }
}

/// s / sqrt(s^2 + alpha), strictly inside (-1, 1) for finite s.
pub fn normalize_score(s: f64, alpha: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    s / (s * s + alpha).sqrt()
}

struct Token {
    lower: String,
    all_caps: bool,
}

fn tokenize(raw_text: &str) -> Vec<Token> {
    raw_text
        .split_whitespace()
        .filter_map(|w| {
            let trimmed = w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'');
            if trimmed.is_empty() {
                return None;
            }
            let has_alpha = trimmed.chars().any(|c| c.is_alphabetic());
            Some(Token {
                lower: trimmed.to_lowercase(),
                all_caps: has_alpha && trimmed.chars().all(|c| !c.is_lowercase()),
            })
        })
        .collect()
}

/// Scores a raw text against a valence lexicon.
pub fn score(raw_text: &str, lexicon: &SentimentLexicon) -> SentimentScores {
    let h = &lexicon.heuristics;
    let tokens = tokenize(raw_text);
    if tokens.is_empty() {
        return SentimentScores::neutral();
    }
    // Caps carry emphasis only when the text mixes cases.
    let caps_count = tokens.iter().filter(|t| t.all_caps).count();
    let caps_differential = caps_count > 0 && caps_count < tokens.len();

    let mut valences = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let mut v = match lexicon.valences.get(&tok.lower) {
            Some(&v) => v,
            None => {
                valences.push(0.0);
                continue;
            }
        };
        if caps_differential && tok.all_caps {
            v += h.caps_boost * v.signum();
        }
        // Look back up to three tokens for boosters and negations.
        let mut negated = false;
        for back in 1..=3usize {
            if back > i {
                break;
            }
            let prev = &tokens[i - back];
            if let Some(&b) = lexicon.boosters.get(&prev.lower) {
                let mut b = b * h.booster_decay[back - 1];
                if caps_differential && prev.all_caps {
                    b += h.caps_boost * b.signum();
                }
                v += b * v.signum();
            }
            if lexicon.negations.contains(&prev.lower) {
                negated = true;
            }
        }
        if negated {
            v *= h.negation_damp;
        }
        valences.push(v);
    }

    let exclamations = raw_text.matches('!').count().min(h.max_exclamations);
    let punct_amp = exclamations as f64 * h.exclamation_incr;

    let mut s: f64 = valences.iter().sum();
    if s > 0.0 {
        s += punct_amp;
    } else if s < 0.0 {
        s -= punct_amp;
    }
    let compound = normalize_score(s, h.alpha);

    let mut pos_sum = 0.0;
    let mut neg_sum = 0.0;
    let mut neu_count = 0.0;
    for &v in &valences {
        if v > 0.0 {
            pos_sum += v + 1.0;
        } else if v < 0.0 {
            neg_sum += v - 1.0;
        } else {
            neu_count += 1.0;
        }
    }
    if pos_sum > neg_sum.abs() {
        pos_sum += punct_amp;
    } else if pos_sum < neg_sum.abs() {
        neg_sum -= punct_amp;
    }
    let total = pos_sum + neg_sum.abs() + neu_count;
    if total == 0.0 {
        return SentimentScores::neutral();
    }
    SentimentScores {
        pos: pos_sum / total,
        neg: neg_sum.abs() / total,
        neu: neu_count / total,
        compound,
    }
}
