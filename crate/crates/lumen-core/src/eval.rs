//! Evaluation harness: multi-label metrics, the fair-coin baseline, the
//! label-constrained topic-model baseline, k-fold cross-validation, grid
//! search, and a synthetic corpus generator for desk-scale verification.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{kfold_split, Corpus, Document, LabelSchema};
use crate::error::{Error, Result};
use crate::forest::PredictionSet;
use crate::pipeline::{prepare_document, train, DocOutcome, PipelineConfig};
use crate::seed::{derive, stream};
use crate::topics::fit_labeled_lda;

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Confusion counts for one label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl LabelCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        f1(self.precision(), self.recall())
    }

    pub fn add(&mut self, other: &LabelCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// F = 2PR / (P + R), zero when both are zero.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Per-label confusion counts for aligned prediction and gold matrices.
pub fn confusion_counts(pred: &[Vec<bool>], gold: &[Vec<bool>]) -> Result<Vec<LabelCounts>> {
    if pred.len() != gold.len() {
        return Err(Error::SchemaMismatch(format!(
            "{} prediction rows vs {} gold rows",
            pred.len(),
            gold.len()
        )));
    }
    let width = gold.first().map(|r| r.len()).unwrap_or(0);
    let mut counts = vec![LabelCounts::default(); width];
    for (p_row, g_row) in pred.iter().zip(gold) {
        if p_row.len() != width || g_row.len() != width {
            return Err(Error::SchemaMismatch("ragged label matrix".into()));
        }
        for l in 0..width {
            match (p_row[l], g_row[l]) {
                (true, true) => counts[l].tp += 1,
                (true, false) => counts[l].fp += 1,
                (false, true) => counts[l].fn_ += 1,
                (false, false) => counts[l].tn += 1,
            }
        }
    }
    Ok(counts)
}

/// Unweighted mean of per-label F1.
pub fn f1_macro(counts: &[LabelCounts]) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    counts.iter().map(LabelCounts::f1).sum::<f64>() / counts.len() as f64
}

/// F1 of the globally pooled TP/FP/FN.
pub fn f1_micro(counts: &[LabelCounts]) -> f64 {
    let mut pooled = LabelCounts::default();
    for c in counts {
        pooled.add(c);
    }
    pooled.f1()
}

/// Fraction of (document, label) cells predicted correctly.
pub fn accuracy(counts: &[LabelCounts]) -> f64 {
    let correct: u64 = counts.iter().map(|c| c.tp + c.tn).sum();
    let total: u64 = counts.iter().map(LabelCounts::total).sum();
    ratio(correct, total)
}

/// Fraction of documents whose whole bit-vector matches.
pub fn exact_match_accuracy(pred: &[Vec<bool>], gold: &[Vec<bool>]) -> f64 {
    if pred.is_empty() {
        return 0.0;
    }
    let hits = pred.iter().zip(gold).filter(|(p, g)| p == g).count();
    hits as f64 / pred.len() as f64
}

/// The headline numbers for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub f1_macro: f64,
    pub f1_micro: f64,
    pub accuracy: f64,
    pub exact_match: f64,
}

impl MetricSummary {
    pub fn from_counts(counts: &[LabelCounts], pred: &[Vec<bool>], gold: &[Vec<bool>]) -> Self {
        MetricSummary {
            f1_macro: f1_macro(counts),
            f1_micro: f1_micro(counts),
            accuracy: accuracy(counts),
            exact_match: exact_match_accuracy(pred, gold),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerLabelMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    #[serde(flatten)]
    pub counts: LabelCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub n_test: usize,
    /// Test documents dropped by the short-document filter and therefore
    /// excluded from the fold's metrics.
    pub n_filtered: usize,
    #[serde(flatten)]
    pub summary: MetricSummary,
}

/// Cross-validation report for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: String,
    /// Unweighted mean over folds.
    pub mean: MetricSummary,
    /// Metrics of the pooled confusion counts across folds.
    pub pooled: MetricSummary,
    pub per_label: Vec<PerLabelMetrics>,
    pub folds: Vec<FoldMetrics>,
}

fn mean_summary(folds: &[FoldMetrics]) -> MetricSummary {
    let n = folds.len() as f64;
    MetricSummary {
        f1_macro: folds.iter().map(|f| f.summary.f1_macro).sum::<f64>() / n,
        f1_micro: folds.iter().map(|f| f.summary.f1_micro).sum::<f64>() / n,
        accuracy: folds.iter().map(|f| f.summary.accuracy).sum::<f64>() / n,
        exact_match: folds.iter().map(|f| f.summary.exact_match).sum::<f64>() / n,
    }
}

fn per_label_metrics(schema: &LabelSchema, counts: &[LabelCounts]) -> Vec<PerLabelMetrics> {
    schema
        .names()
        .iter()
        .zip(counts)
        .map(|(name, c)| PerLabelMetrics {
            label: name.clone(),
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
            counts: *c,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Naive baseline
// ---------------------------------------------------------------------------

/// Fair-coin predictions: every (document, label) bit is an independent
/// Bernoulli(1/2) draw; deterministic per seed.
pub fn naive_baseline(num_labels: usize, num_docs: usize, seed: u64) -> PredictionSet {
    let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, stream::NAIVE));
    let probs: Vec<Vec<f64>> = (0..num_docs)
        .map(|_| {
            (0..num_labels)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    PredictionSet::from_probs(probs, 0.5)
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

/// Predictor trained per fold. Receives the training sub-corpus and the test
/// documents; returns one bit-vector per test document, or `None` for a
/// document it abstains on.
trait FoldMethod {
    fn run(
        &self,
        train_corpus: &Corpus,
        test_docs: &[Document],
        fold_seed: u64,
    ) -> Result<Vec<Option<Vec<bool>>>>;
}

struct LumenMethod<'a> {
    config: &'a PipelineConfig,
}

impl FoldMethod for LumenMethod<'_> {
    fn run(
        &self,
        train_corpus: &Corpus,
        test_docs: &[Document],
        fold_seed: u64,
    ) -> Result<Vec<Option<Vec<bool>>>> {
        let mut config = self.config.clone();
        config.seed = fold_seed;
        if config.joint_fit {
            // Compatibility mode: let the topic model see the test tokens.
            // The forest still trains on the training fold only.
            let mut joint = train_corpus.clone();
            for doc in test_docs {
                joint.documents.push(Document {
                    id: format!("__heldout_{}", doc.id),
                    raw_text: doc.raw_text.clone(),
                    labels: Some(vec![false; train_corpus.schema.len()]),
                });
            }
            // Joint vocabulary, frozen counts still come from the final
            // sweep over all documents.
            let pipeline = train(&joint, &config)?;
            return Ok(collect_predictions(&pipeline, test_docs)?);
        }
        let pipeline = train(train_corpus, &config)?;
        Ok(collect_predictions(&pipeline, test_docs)?)
    }
}

fn collect_predictions(
    pipeline: &crate::pipeline::TrainedPipeline,
    test_docs: &[Document],
) -> Result<Vec<Option<Vec<bool>>>> {
    Ok(pipeline
        .predict(test_docs)?
        .into_iter()
        .map(|p| match p.outcome {
            DocOutcome::Scored { labels, .. } => Some(labels),
            DocOutcome::Filtered => None,
        })
        .collect())
}

struct LabeledLdaMethod<'a> {
    config: &'a PipelineConfig,
}

impl FoldMethod for LabeledLdaMethod<'_> {
    fn run(
        &self,
        train_corpus: &Corpus,
        test_docs: &[Document],
        fold_seed: u64,
    ) -> Result<Vec<Option<Vec<bool>>>> {
        let preprocess = &self.config.preprocess;
        let mut streams = Vec::new();
        let mut labels = Vec::new();
        for doc in &train_corpus.documents {
            let prep = prepare_document(&doc.raw_text, preprocess);
            if prep.clean_len < preprocess.min_doc_tokens {
                continue;
            }
            streams.push(prep.topic_stream);
            labels.push(doc.labels.clone().ok_or_else(|| {
                Error::LabelsRequired("labeled topic baseline needs labels".into())
            })?);
        }
        let lda = fit_labeled_lda(
            &streams,
            &labels,
            train_corpus.schema.names(),
            0.1,
            0.01,
            self.config.topics.iters,
            derive(fold_seed, stream::LDA),
        )?;
        let mut out = Vec::with_capacity(test_docs.len());
        for (i, doc) in test_docs.iter().enumerate() {
            let prep = prepare_document(&doc.raw_text, preprocess);
            if prep.clean_len < preprocess.min_doc_tokens {
                out.push(None);
                continue;
            }
            let bits = lda.predict(
                &prep.topic_stream,
                self.config.topics.heldout_iters,
                derive(fold_seed, stream::HELDOUT ^ (i as u64) << 16),
            );
            out.push(Some(bits));
        }
        Ok(out)
    }
}

struct NaiveMethod;

impl FoldMethod for NaiveMethod {
    fn run(
        &self,
        train_corpus: &Corpus,
        test_docs: &[Document],
        fold_seed: u64,
    ) -> Result<Vec<Option<Vec<bool>>>> {
        let preds = naive_baseline(train_corpus.schema.len(), test_docs.len(), fold_seed);
        Ok(preds.bits.into_iter().map(Some).collect())
    }
}

fn cross_validate_method(
    corpus: &Corpus,
    method: &dyn FoldMethod,
    method_name: &str,
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    if !corpus.is_fully_labeled() {
        return Err(Error::LabelsRequired(
            "cross-validation requires gold labels".into(),
        ));
    }
    let folds = kfold_split(corpus.len(), k, derive(seed, stream::KFOLD))?;
    let mut fold_metrics = Vec::with_capacity(k);
    let mut pooled = vec![LabelCounts::default(); corpus.schema.len()];
    let mut pooled_pred: Vec<Vec<bool>> = Vec::new();
    let mut pooled_gold: Vec<Vec<bool>> = Vec::new();
    for (fold, (train_idx, test_idx)) in folds.iter().enumerate() {
        let train_corpus = corpus.subset(train_idx);
        let test_docs: Vec<Document> = test_idx
            .iter()
            .map(|&i| corpus.documents[i].clone())
            .collect();
        let fold_seed = derive(seed, 0x1000 + fold as u64);
        let outcomes = method.run(&train_corpus, &test_docs, fold_seed)?;

        let mut pred = Vec::new();
        let mut gold = Vec::new();
        let mut filtered = 0usize;
        for (doc, outcome) in test_docs.iter().zip(outcomes) {
            match outcome {
                Some(bits) => {
                    pred.push(bits);
                    gold.push(doc.labels.clone().expect("labeled corpus"));
                }
                None => filtered += 1,
            }
        }
        let counts = confusion_counts(&pred, &gold)?;
        for (p, c) in pooled.iter_mut().zip(&counts) {
            p.add(c);
        }
        pooled_pred.extend(pred.iter().cloned());
        pooled_gold.extend(gold.iter().cloned());
        fold_metrics.push(FoldMetrics {
            fold,
            n_test: test_docs.len(),
            n_filtered: filtered,
            summary: MetricSummary::from_counts(&counts, &pred, &gold),
        });
    }
    Ok(EvalReport {
        method: method_name.to_string(),
        mean: mean_summary(&fold_metrics),
        pooled: MetricSummary::from_counts(&pooled, &pooled_pred, &pooled_gold),
        per_label: per_label_metrics(&corpus.schema, &pooled),
        folds: fold_metrics,
    })
}

/// k-fold cross-validation of the full pipeline with fold hygiene: each
/// fold's model is trained on its training documents only.
pub fn cross_validate(
    corpus: &Corpus,
    config: &PipelineConfig,
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    cross_validate_method(corpus, &LumenMethod { config }, "lumen", k, seed)
}

/// Cross-validation of the label-constrained topic-model baseline.
pub fn cross_validate_labeled_lda(
    corpus: &Corpus,
    config: &PipelineConfig,
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    cross_validate_method(corpus, &LabeledLdaMethod { config }, "labeled_lda", k, seed)
}

/// Cross-validation of the fair-coin baseline (fold structure kept so the
/// numbers are comparable).
pub fn cross_validate_naive(corpus: &Corpus, k: usize, seed: u64) -> Result<EvalReport> {
    cross_validate_method(corpus, &NaiveMethod, "naive", k, seed)
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

/// The searched axes: topic count and tree count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub topics: Vec<usize>,
    pub trees: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    F1Micro,
    F1Macro,
}

impl Objective {
    fn of(&self, summary: &MetricSummary) -> f64 {
        match self {
            Objective::F1Micro => summary.f1_micro,
            Objective::F1Macro => summary.f1_macro,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub topics: usize,
    pub trees: usize,
    pub objective: f64,
    #[serde(flatten)]
    pub summary: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_topics: usize,
    pub best_trees: usize,
    pub best_objective: f64,
    pub cells: Vec<GridCell>,
}

/// Evaluates every (topics, trees) cell with the same seeds and returns the
/// argmax by the objective; ties go to fewer trees, then fewer topics.
pub fn grid_search(
    corpus: &Corpus,
    base_config: &PipelineConfig,
    grid: &GridSpec,
    k: usize,
    seed: u64,
    objective: Objective,
) -> Result<GridSearchResult> {
    if grid.topics.is_empty() || grid.trees.is_empty() {
        return Err(Error::Config("empty grid".into()));
    }
    let mut cells = Vec::with_capacity(grid.topics.len() * grid.trees.len());
    for &topics in &grid.topics {
        for &trees in &grid.trees {
            let mut config = base_config.clone();
            config.topics.num_topics = topics;
            config.forest.n_trees = trees;
            let report = cross_validate(corpus, &config, k, seed)?;
            cells.push(GridCell {
                topics,
                trees,
                objective: objective.of(&report.mean),
                summary: report.mean,
            });
        }
    }
    let best = cells
        .iter()
        .max_by(|a, b| {
            a.objective
                .partial_cmp(&b.objective)
                .unwrap()
                .then(b.trees.cmp(&a.trees))
                .then(b.topics.cmp(&a.topics))
        })
        .expect("non-empty grid");
    Ok(GridSearchResult {
        best_topics: best.topics,
        best_trees: best.trees,
        best_objective: best.objective,
        cells: cells.clone(),
    })
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

const MONEY_POOL: &[&str] = &["bank", "refund", "credit", "coupon", "cheaper", "account", "auction"];
const POSITIVE_POOL: &[&str] = &["love", "great", "wonderful", "excellent", "happy"];
const NEGATIVE_POOL: &[&str] = &["terrible", "awful", "horrible", "hate", "worst"];
const TOPIC_ROOTS: &[&str] = &[
    "zephyr", "quorin", "marvel", "coprat", "virdak", "helmut", "tanrek", "bequill",
];
// Suffix letters that no stemmer rule strips, keeping synthetic words stable.
const SUFFIX_LETTERS: &[u8] = b"bcfhjkmpqvwxz";

/// How token pools are injected per document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectionMode {
    /// Fixed per-profile counts: `round(rate * doc_len)` tokens.
    Exact,
    /// Independent per-slot draws with the profile's rate.
    Rate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub docs: usize,
    pub topics: usize,
    pub vocab_per_topic: usize,
    pub doc_len: usize,
    /// Probability of flipping each final label bit.
    pub noise: f64,
    pub seed: u64,
    pub mode: InjectionMode,
    /// Probability that a document is money-dense.
    pub money_doc_rate: f64,
    pub money_high: f64,
    pub money_low: f64,
    /// Probability that a document has the positive sentiment profile.
    pub positive_doc_rate: f64,
    pub sentiment_strong: f64,
    pub sentiment_weak: f64,
    /// Density rule: money share strictly above this marks the label.
    pub money_threshold: f64,
    /// Planted topic that turns on the topic label.
    pub target_topic: usize,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            docs: 500,
            topics: 4,
            vocab_per_topic: 20,
            doc_len: 50,
            noise: 0.0,
            seed: 0,
            mode: InjectionMode::Exact,
            money_doc_rate: 0.4,
            money_high: 0.18,
            money_low: 0.0,
            positive_doc_rate: 0.5,
            sentiment_strong: 0.10,
            sentiment_weak: 0.0,
            money_threshold: 0.05,
            target_topic: 1,
        }
    }
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.docs == 0 || self.doc_len == 0 {
            return Err(Error::Config("docs and doc_len must be positive".into()));
        }
        if self.topics == 0 || self.topics > TOPIC_ROOTS.len() {
            return Err(Error::Config(format!(
                "topics must be in 1..={}",
                TOPIC_ROOTS.len()
            )));
        }
        if self.vocab_per_topic == 0 || self.vocab_per_topic > SUFFIX_LETTERS.len() * SUFFIX_LETTERS.len()
        {
            return Err(Error::Config("vocab_per_topic out of range".into()));
        }
        if self.target_topic >= self.topics {
            return Err(Error::Config("target_topic out of range".into()));
        }
        let rates = [
            self.noise,
            self.money_doc_rate,
            self.money_high,
            self.money_low,
            self.positive_doc_rate,
            self.sentiment_strong,
            self.sentiment_weak,
        ];
        if rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::Config("rates must lie in [0, 1]".into()));
        }
        if self.money_high + self.sentiment_strong >= 1.0 {
            return Err(Error::Config(
                "injection rates leave no room for topic words".into(),
            ));
        }
        Ok(())
    }

    pub fn label_schema() -> LabelSchema {
        LabelSchema::new(vec![
            "money_dense".into(),
            "topic_match".into(),
            "positive_tone".into(),
        ])
        .unwrap()
    }
}

fn topic_word(topic: usize, j: usize) -> String {
    let a = SUFFIX_LETTERS[j / SUFFIX_LETTERS.len()] as char;
    let b = SUFFIX_LETTERS[j % SUFFIX_LETTERS.len()] as char;
    format!("{}{}{}", TOPIC_ROOTS[topic], a, b)
}

/// Ground truth emitted alongside each generated document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticTruth {
    pub id: String,
    pub planted_topic: usize,
    pub money_count: usize,
    pub pos_count: usize,
    pub neg_count: usize,
    pub labels: Vec<bool>,
}

/// Generates a corpus from a planted topic model with rule-derived labels:
/// money density above the threshold, dominant planted topic equal to the
/// target, and more positive than negative sentiment words.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<(Corpus, Vec<SyntheticTruth>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive(spec.seed, stream::SYNTH));
    let schema = SyntheticSpec::label_schema();
    let mut documents = Vec::with_capacity(spec.docs);
    let mut truths = Vec::with_capacity(spec.docs);

    for d in 0..spec.docs {
        let planted_topic = rng.gen_range(0..spec.topics);
        let money_doc = rng.gen_bool(spec.money_doc_rate);
        let positive_doc = rng.gen_bool(spec.positive_doc_rate);
        let money_rate = if money_doc {
            spec.money_high
        } else {
            spec.money_low
        };
        let (pos_rate, neg_rate) = if positive_doc {
            (spec.sentiment_strong, spec.sentiment_weak)
        } else {
            (spec.sentiment_weak, spec.sentiment_strong)
        };

        let mut tokens: Vec<String> = Vec::with_capacity(spec.doc_len);
        let (mut money_count, mut pos_count, mut neg_count) = (0usize, 0usize, 0usize);
        match spec.mode {
            InjectionMode::Exact => {
                money_count = (money_rate * spec.doc_len as f64).round() as usize;
                pos_count = (pos_rate * spec.doc_len as f64).round() as usize;
                neg_count = (neg_rate * spec.doc_len as f64).round() as usize;
                let topic_count = spec
                    .doc_len
                    .saturating_sub(money_count + pos_count + neg_count);
                for i in 0..money_count {
                    tokens.push(MONEY_POOL[i % MONEY_POOL.len()].to_string());
                }
                for i in 0..pos_count {
                    tokens.push(POSITIVE_POOL[i % POSITIVE_POOL.len()].to_string());
                }
                for i in 0..neg_count {
                    tokens.push(NEGATIVE_POOL[i % NEGATIVE_POOL.len()].to_string());
                }
                for _ in 0..topic_count {
                    let j = rng.gen_range(0..spec.vocab_per_topic);
                    tokens.push(topic_word(planted_topic, j));
                }
                // Mix the injected words in.
                for i in (1..tokens.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    tokens.swap(i, j);
                }
            }
            InjectionMode::Rate => {
                for _ in 0..spec.doc_len {
                    let u: f64 = rng.gen();
                    if u < money_rate {
                        money_count += 1;
                        tokens.push(MONEY_POOL[rng.gen_range(0..MONEY_POOL.len())].to_string());
                    } else if u < money_rate + pos_rate {
                        pos_count += 1;
                        tokens
                            .push(POSITIVE_POOL[rng.gen_range(0..POSITIVE_POOL.len())].to_string());
                    } else if u < money_rate + pos_rate + neg_rate {
                        neg_count += 1;
                        tokens
                            .push(NEGATIVE_POOL[rng.gen_range(0..NEGATIVE_POOL.len())].to_string());
                    } else {
                        let j = rng.gen_range(0..spec.vocab_per_topic);
                        tokens.push(topic_word(planted_topic, j));
                    }
                }
            }
        }
        let topic_count = spec.doc_len - money_count - pos_count - neg_count;

        let mut labels = vec![
            money_count as f64 / spec.doc_len as f64 > spec.money_threshold,
            planted_topic == spec.target_topic && topic_count >= 1,
            pos_count > neg_count,
        ];
        if spec.noise > 0.0 {
            for bit in labels.iter_mut() {
                if rng.gen_bool(spec.noise) {
                    *bit = !*bit;
                }
            }
        }

        let id = format!("synth{d:05}");
        documents.push(Document {
            id: id.clone(),
            raw_text: tokens.join(" "),
            labels: Some(labels.clone()),
        });
        truths.push(SyntheticTruth {
            id,
            planted_topic,
            money_count,
            pos_count,
            neg_count,
            labels,
        });
    }
    Ok((Corpus::new(schema, documents)?, truths))
}
