//! Topic structure features: LDA fit by collapsed Gibbs sampling, held-out
//! inference against a frozen model, and the label-constrained variant.
//!
//! The sampler integrates out the topic and word distributions and
//! resamples each token's topic from
//! `p(z = t) ∝ (n_wt + β) / (n_t + Vβ) · (n_dt + α)`,
//! keeping the count matrices consistent after every sweep. Smoothed point
//! estimates come from the final sweep's assignments.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::preprocess::TokenStream;

/// Bijective word <-> index map, built in first-appearance order.
/// Serializes as the plain word list; the reverse map is rebuilt on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    words: Vec<String>,
    index: std::collections::HashMap<String, usize>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl From<Vec<String>> for Vocabulary {
    fn from(words: Vec<String>) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vocabulary { words, index }
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(vocab: Vocabulary) -> Self {
        vocab.words
    }
}

impl Vocabulary {
    pub fn build(streams: &[TokenStream]) -> Self {
        let mut vocab = Vocabulary::from(Vec::new());
        for stream in streams {
            for tok in stream.iter() {
                vocab.intern(tok);
            }
        }
        vocab
    }

    fn intern(&mut self, word: &str) -> usize {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let i = self.words.len();
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), i);
        i
    }

    pub fn get(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Smoothed per-document topic distribution; sums to one, entries positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDistribution {
    pub theta: Vec<f64>,
}

impl TopicDistribution {
    /// Total variation distance to another distribution.
    pub fn total_variation(&self, other: &TopicDistribution) -> f64 {
        0.5 * self
            .theta
            .iter()
            .zip(&other.theta)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub num_topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iters: usize,
    pub seed: u64,
}

impl LdaParams {
    /// Conventional defaults: alpha = 50/K, beta = 0.01, 1000 sweeps.
    pub fn with_defaults(num_topics: usize, seed: u64) -> Self {
        LdaParams {
            num_topics,
            alpha: 50.0 / num_topics as f64,
            beta: 0.01,
            iters: 1000,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_topics < 1 {
            return Err(Error::Config("num_topics must be at least 1".into()));
        }
        if !(self.alpha > 0.0) || !(self.beta > 0.0) {
            return Err(Error::Config("alpha and beta must be positive".into()));
        }
        if self.iters < 1 {
            return Err(Error::Config("iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Fitted LDA state: count matrices, final assignments, and the vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub num_topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub vocabulary: Vocabulary,
    /// Word-topic counts, `V x K`.
    pub word_topic: Vec<Vec<u32>>,
    /// Per-topic totals, length `K`.
    pub topic_totals: Vec<u32>,
    /// Document-topic counts for the training set, `D x K`.
    pub doc_topic: Vec<Vec<u32>>,
    /// Token count per training document.
    pub doc_lens: Vec<u32>,
    /// Final per-token topic assignments, per training document.
    pub assignments: Vec<Vec<u32>>,
    pub seed: u64,
    /// log p(w|z) after each sweep.
    pub log_likelihood_trace: Vec<f64>,
}

/// Tokens mapped to word ids, unseen words skipped.
fn to_ids(vocab: &Vocabulary, stream: &TokenStream) -> Vec<usize> {
    stream.iter().filter_map(|t| vocab.get(t)).collect()
}

struct GibbsState {
    num_topics: usize,
    alpha: f64,
    beta: f64,
    vocab_size: usize,
    docs: Vec<Vec<usize>>,
    assignments: Vec<Vec<u32>>,
    word_topic: Vec<Vec<u32>>,
    topic_totals: Vec<u32>,
    doc_topic: Vec<Vec<u32>>,
    /// Admissible topics per document; `None` means unconstrained.
    allowed: Option<Vec<Vec<usize>>>,
}

impl GibbsState {
    fn init(
        docs: Vec<Vec<usize>>,
        vocab_size: usize,
        params: &LdaParams,
        allowed: Option<Vec<Vec<usize>>>,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let k = params.num_topics;
        let d = docs.len();
        let mut state = GibbsState {
            num_topics: k,
            alpha: params.alpha,
            beta: params.beta,
            vocab_size,
            assignments: docs.iter().map(|doc| vec![0u32; doc.len()]).collect(),
            word_topic: vec![vec![0u32; k]; vocab_size],
            topic_totals: vec![0u32; k],
            doc_topic: vec![vec![0u32; k]; d],
            docs,
            allowed,
        };
        for d in 0..state.docs.len() {
            for i in 0..state.docs[d].len() {
                let t = match &state.allowed {
                    Some(sets) => sets[d][rng.gen_range(0..sets[d].len())],
                    None => rng.gen_range(0..k),
                };
                state.assign(d, i, t);
            }
        }
        state
    }

    fn assign(&mut self, d: usize, i: usize, t: usize) {
        let w = self.docs[d][i];
        self.assignments[d][i] = t as u32;
        self.word_topic[w][t] += 1;
        self.topic_totals[t] += 1;
        self.doc_topic[d][t] += 1;
    }

    fn unassign(&mut self, d: usize, i: usize) {
        let w = self.docs[d][i];
        let t = self.assignments[d][i] as usize;
        self.word_topic[w][t] -= 1;
        self.topic_totals[t] -= 1;
        self.doc_topic[d][t] -= 1;
    }

    fn sweep(&mut self, rng: &mut ChaCha8Rng) {
        let v_beta = self.vocab_size as f64 * self.beta;
        let mut weights = vec![0.0f64; self.num_topics];
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                self.unassign(d, i);
                let w = self.docs[d][i];
                let candidates: &[usize] = match &self.allowed {
                    Some(sets) => &sets[d],
                    None => &[],
                };
                let t = if candidates.is_empty() {
                    let mut total = 0.0;
                    for t in 0..self.num_topics {
                        let wt = (self.word_topic[w][t] as f64 + self.beta)
                            / (self.topic_totals[t] as f64 + v_beta);
                        let dt = self.doc_topic[d][t] as f64 + self.alpha;
                        weights[t] = wt * dt;
                        total += weights[t];
                    }
                    sample_index(&weights[..self.num_topics], total, rng)
                } else {
                    let mut total = 0.0;
                    for (slot, &t) in candidates.iter().enumerate() {
                        let wt = (self.word_topic[w][t] as f64 + self.beta)
                            / (self.topic_totals[t] as f64 + v_beta);
                        let dt = self.doc_topic[d][t] as f64 + self.alpha;
                        weights[slot] = wt * dt;
                        total += weights[slot];
                    }
                    candidates[sample_index(&weights[..candidates.len()], total, rng)]
                };
                self.assign(d, i, t);
            }
        }
        debug_assert!(self.counts_consistent());
    }

    fn counts_consistent(&self) -> bool {
        let mut per_topic = vec![0u64; self.num_topics];
        for row in &self.word_topic {
            for (t, &c) in row.iter().enumerate() {
                per_topic[t] += u64::from(c);
            }
        }
        if per_topic
            .iter()
            .zip(&self.topic_totals)
            .any(|(&a, &b)| a != u64::from(b))
        {
            return false;
        }
        self.docs
            .iter()
            .zip(&self.doc_topic)
            .all(|(doc, row)| doc.len() as u64 == row.iter().map(|&c| u64::from(c)).sum::<u64>())
    }

    /// log p(w|z) under the symmetric Dirichlet prior on topic-word rows.
    fn log_likelihood(&self) -> f64 {
        log_likelihood_from_counts(
            &self.word_topic,
            &self.topic_totals,
            self.beta,
            self.vocab_size,
        )
    }
}

/// Corpus likelihood log p(w|z) computed purely from counts:
/// `K lnΓ(Vβ) + Σ_t [ Σ_{w: n_wt>0} (lnΓ(n_wt+β) − lnΓ(β)) − lnΓ(n_t+Vβ) ]`.
pub fn log_likelihood_from_counts(
    word_topic: &[Vec<u32>],
    topic_totals: &[u32],
    beta: f64,
    vocab_size: usize,
) -> f64 {
    let v = vocab_size as f64;
    let k = topic_totals.len();
    let mut ll = k as f64 * ln_gamma(v * beta);
    for t in 0..k {
        for row in word_topic {
            if row[t] > 0 {
                ll += ln_gamma(f64::from(row[t]) + beta) - ln_gamma(beta);
            }
        }
        ll -= ln_gamma(f64::from(topic_totals[t]) + v * beta);
    }
    ll
}

fn sample_index(weights: &[f64], total: f64, rng: &mut ChaCha8Rng) -> usize {
    if !(total > 0.0) {
        return rng.gen_range(0..weights.len());
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Fits LDA on tokenized documents by collapsed Gibbs sampling.
pub fn fit_lda(streams: &[TokenStream], params: &LdaParams) -> Result<TopicModel> {
    params.validate()?;
    if streams.iter().all(|s| s.is_empty()) {
        return Err(Error::EmptyCorpus);
    }
    let vocabulary = Vocabulary::build(streams);
    let docs: Vec<Vec<usize>> = streams
        .iter()
        .map(|s| to_ids(&vocabulary, s))
        .collect();
    fit_gibbs(docs, vocabulary, params, None)
}

fn fit_gibbs(
    docs: Vec<Vec<usize>>,
    vocabulary: Vocabulary,
    params: &LdaParams,
    allowed: Option<Vec<Vec<usize>>>,
) -> Result<TopicModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let doc_lens: Vec<u32> = docs.iter().map(|d| d.len() as u32).collect();
    let mut state = GibbsState::init(docs, vocabulary.len(), params, allowed, &mut rng);
    let mut trace = Vec::with_capacity(params.iters);
    for _ in 0..params.iters {
        state.sweep(&mut rng);
        trace.push(state.log_likelihood());
    }
    Ok(TopicModel {
        num_topics: params.num_topics,
        alpha: params.alpha,
        beta: params.beta,
        vocabulary,
        word_topic: state.word_topic,
        topic_totals: state.topic_totals,
        doc_topic: state.doc_topic,
        doc_lens,
        assignments: state.assignments,
        seed: params.seed,
        log_likelihood_trace: trace,
    })
}

impl TopicModel {
    pub fn num_docs(&self) -> usize {
        self.doc_topic.len()
    }

    /// Smoothed topic distribution of training document `d`:
    /// `theta_t = (n_dt + alpha) / (m_d + K alpha)`.
    pub fn doc_topics(&self, d: usize) -> Result<TopicDistribution> {
        let row = self.doc_topic.get(d).ok_or(Error::IndexOutOfRange(d))?;
        let denom = f64::from(self.doc_lens[d]) + self.num_topics as f64 * self.alpha;
        Ok(TopicDistribution {
            theta: row
                .iter()
                .map(|&c| (f64::from(c) + self.alpha) / denom)
                .collect(),
        })
    }

    /// Smoothed topic-word probability `p(w|t)`.
    pub fn word_prob(&self, word: usize, topic: usize) -> f64 {
        (f64::from(self.word_topic[word][topic]) + self.beta)
            / (f64::from(self.topic_totals[topic]) + self.vocabulary.len() as f64 * self.beta)
    }

    /// The `n` highest-probability words for each topic.
    pub fn top_words(&self, n: usize) -> Vec<Vec<(String, f64)>> {
        (0..self.num_topics)
            .map(|t| {
                let mut scored: Vec<(usize, f64)> = (0..self.vocabulary.len())
                    .map(|w| (w, self.word_prob(w, t)))
                    .collect();
                scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
                scored
                    .into_iter()
                    .take(n)
                    .map(|(w, p)| (self.vocabulary.word(w).to_string(), p))
                    .collect()
            })
            .collect()
    }

    /// Folds a new document into the frozen model: Gibbs-samples its token
    /// topics using the fitted word-topic counts plus the document's own
    /// local counts. Unseen words are skipped; a document with no known
    /// words gets the uniform distribution.
    pub fn infer_heldout(&self, tokens: &TokenStream, iters: usize, seed: u64) -> TopicDistribution {
        let ids = to_ids(&self.vocabulary, tokens);
        let k = self.num_topics;
        if ids.is_empty() {
            return TopicDistribution {
                theta: vec![1.0 / k as f64; k],
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v_beta = self.vocabulary.len() as f64 * self.beta;
        let mut local = vec![0u32; k];
        let mut z = Vec::with_capacity(ids.len());
        for _ in &ids {
            let t = rng.gen_range(0..k);
            local[t] += 1;
            z.push(t);
        }
        let mut weights = vec![0.0f64; k];
        for _ in 0..iters.max(1) {
            for (i, &w) in ids.iter().enumerate() {
                local[z[i]] -= 1;
                let mut total = 0.0;
                for t in 0..k {
                    let wt = (f64::from(self.word_topic[w][t]) + self.beta)
                        / (f64::from(self.topic_totals[t]) + v_beta);
                    let dt = f64::from(local[t]) + self.alpha;
                    weights[t] = wt * dt;
                    total += weights[t];
                }
                let t = sample_index(&weights, total, &mut rng);
                local[t] += 1;
                z[i] = t;
            }
        }
        let denom = ids.len() as f64 + k as f64 * self.alpha;
        TopicDistribution {
            theta: local
                .iter()
                .map(|&c| (f64::from(c) + self.alpha) / denom)
                .collect(),
        }
    }

    /// Verifies the count invariants; used by tests and debug assertions.
    pub fn check_invariants(&self) -> Result<()> {
        for t in 0..self.num_topics {
            let sum: u64 = self.word_topic.iter().map(|row| u64::from(row[t])).sum();
            if sum != u64::from(self.topic_totals[t]) {
                return Err(Error::Config(format!(
                    "word-topic column {t} sums to {sum}, totals say {}",
                    self.topic_totals[t]
                )));
            }
        }
        for (d, row) in self.doc_topic.iter().enumerate() {
            let sum: u64 = row.iter().map(|&c| u64::from(c)).sum();
            if sum != u64::from(self.doc_lens[d]) {
                return Err(Error::Config(format!(
                    "doc {d} topic counts sum to {sum}, length is {}",
                    self.doc_lens[d]
                )));
            }
        }
        Ok(())
    }

    /// Relabels topics by `perm`, where new topic `t` is old topic
    /// `perm[t]`. Getters commute with the permutation.
    pub fn permute_topics(&self, perm: &[usize]) -> TopicModel {
        assert_eq!(perm.len(), self.num_topics);
        let remap_row = |row: &Vec<u32>| -> Vec<u32> { perm.iter().map(|&p| row[p]).collect() };
        let inverse: Vec<u32> = {
            let mut inv = vec![0u32; perm.len()];
            for (new_t, &old_t) in perm.iter().enumerate() {
                inv[old_t] = new_t as u32;
            }
            inv
        };
        TopicModel {
            num_topics: self.num_topics,
            alpha: self.alpha,
            beta: self.beta,
            vocabulary: self.vocabulary.clone(),
            word_topic: self.word_topic.iter().map(remap_row).collect(),
            topic_totals: perm.iter().map(|&p| self.topic_totals[p]).collect(),
            doc_topic: self.doc_topic.iter().map(remap_row).collect(),
            doc_lens: self.doc_lens.clone(),
            assignments: self
                .assignments
                .iter()
                .map(|doc| doc.iter().map(|&z| inverse[z as usize]).collect())
                .collect(),
            seed: self.seed,
            log_likelihood_trace: self.log_likelihood_trace.clone(),
        }
    }
}

/// A label-constrained topic model: one topic per label, plus a background
/// topic when any training document carries no labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledLda {
    pub model: TopicModel,
    pub label_names: Vec<String>,
    pub background: Option<usize>,
}

/// Trains the label-constrained variant: each document's tokens may only be
/// assigned topics from its positive label set (plus the background topic
/// when present).
pub fn fit_labeled_lda(
    streams: &[TokenStream],
    labels: &[Vec<bool>],
    label_names: &[String],
    alpha: f64,
    beta: f64,
    iters: usize,
    seed: u64,
) -> Result<LabeledLda> {
    if streams.len() != labels.len() {
        return Err(Error::SchemaMismatch(format!(
            "{} documents but {} label rows",
            streams.len(),
            labels.len()
        )));
    }
    let num_labels = label_names.len();
    if labels.iter().any(|row| row.len() != num_labels) {
        return Err(Error::SchemaMismatch(
            "label row width differs from schema".into(),
        ));
    }
    let needs_background = labels.iter().any(|row| row.iter().all(|&b| !b));
    let background = needs_background.then_some(num_labels);
    let num_topics = num_labels + usize::from(needs_background);

    let allowed: Vec<Vec<usize>> = labels
        .iter()
        .map(|row| {
            let mut set: Vec<usize> = row
                .iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect();
            if let Some(bg) = background {
                set.push(bg);
            }
            set
        })
        .collect();

    let params = LdaParams {
        num_topics,
        alpha,
        beta,
        iters,
        seed,
    };
    params.validate()?;
    if streams.iter().all(|s| s.is_empty()) {
        return Err(Error::EmptyCorpus);
    }
    let vocabulary = Vocabulary::build(streams);
    let docs: Vec<Vec<usize>> = streams.iter().map(|s| to_ids(&vocabulary, s)).collect();
    let model = fit_gibbs(docs, vocabulary, &params, Some(allowed))?;
    Ok(LabeledLda {
        model,
        label_names: label_names.to_vec(),
        background,
    })
}

impl LabeledLda {
    /// Predicts labels for a held-out document: unconstrained fold-in, then
    /// a label is on when its topic mass reaches `1/K`.
    pub fn predict(&self, tokens: &TokenStream, iters: usize, seed: u64) -> Vec<bool> {
        let dist = self.model.infer_heldout(tokens, iters, seed);
        let threshold = 1.0 / self.model.num_topics as f64;
        (0..self.label_names.len())
            .map(|i| dist.theta[i] >= threshold)
            .collect()
    }
}
