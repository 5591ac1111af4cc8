//! Argument surface and config-file resolution.
//!
//! Precedence for every setting: command-line flag, then `--config` file,
//! then built-in default.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use lumen_core::forest::ForestParams;
use lumen_core::pipeline::{PipelineConfig, TopicsConfig};
use lumen_core::Lexicon;
use lumen_core::SentimentLexicon;

#[derive(Parser, Debug)]
#[command(
    name = "lumen",
    version,
    about = "Influence-cue prediction: topic, dictionary, and sentiment features into a random forest"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic labeled corpus with planted ground truth.
    GenSynth(GenSynthArgs),
    /// Tokenize a corpus and show both preprocessing paths per document.
    Preprocess(PreprocessArgs),
    /// Train a pipeline on a labeled corpus and write the model artifact.
    Train(TrainArgs),
    /// Predict cue labels and sentiment for documents with a trained model.
    Predict(PredictArgs),
    /// Cross-validate on a labeled corpus and compare against baselines.
    Evaluate(EvaluateArgs),
    /// Exhaustive search over topic and tree counts by cross-validation.
    GridSearch(GridSearchArgs),
    /// Render a saved evaluation report as a text table.
    Report(ReportArgs),
    /// List the highest-probability words of each fitted topic.
    TopicsTopWords(TopicsTopWordsArgs),
    /// Feature importances of a trained model as CSV, descending.
    Importance(ImportanceArgs),
}

/// Settings shared by the commands that build or train pipelines.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonOpts {
    /// Master seed controlling all randomness.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Declarative JSON config file; explicit flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of topics K.
    #[arg(long)]
    pub topics: Option<usize>,
    /// Number of trees per forest.
    #[arg(long)]
    pub trees: Option<usize>,
    /// Positive-decision probability threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Drop documents with fewer cleaned tokens than this.
    #[arg(long)]
    pub min_doc_tokens: Option<usize>,
    /// Dictionary file (.json native or .dic); default is the bundled
    /// placeholder or $LUMEN_LEXICON_DIR/influence.json when set.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Valence lexicon file (word<TAB>valence); default is bundled or
    /// $LUMEN_LEXICON_DIR/valence.txt when set.
    #[arg(long)]
    pub sentiment_lexicon: Option<PathBuf>,
    /// Comma-separated label names; default infers from the corpus file.
    #[arg(long)]
    pub labels: Option<String>,
    /// Parallel workers for tree training; defaults to logical cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Dirichlet document-topic concentration; default 50/K.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Dirichlet topic-word concentration.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Gibbs sweeps for fitting.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Gibbs sweeps for held-out fold-in.
    #[arg(long)]
    pub heldout_iters: Option<usize>,
    /// Feed the compound sentiment score as an extra feature.
    #[arg(long)]
    pub sentiment_compound_feature: bool,
    /// Fit the topic model jointly on train and test folds (leaky
    /// compatibility mode).
    #[arg(long)]
    pub joint_fit: bool,
    /// Train one joint forest with vector leaves instead of one per label.
    #[arg(long)]
    pub multi_output_trees: bool,
}

#[derive(Args, Debug)]
pub struct GenSynthArgs {
    /// Generator spec as JSON; missing fields take defaults.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Output corpus path (JSONL).
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth sidecar path; default `<out>.truth.jsonl`.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct PreprocessArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Model artifact output path.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Documents to score (JSONL with id and text).
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Reuse a trained model's configuration and schema.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Report output path (JSON); printed as a table either way.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub k_folds: usize,
    /// Skip the labeled-LDA and naive baseline rows.
    #[arg(long)]
    pub no_baselines: bool,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args, Debug)]
pub struct GridSearchArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Comma-separated topic counts, e.g. 5,10,20.
    #[arg(long)]
    pub grid_topics: String,
    /// Comma-separated tree counts, e.g. 50,100,200.
    #[arg(long)]
    pub grid_trees: String,
    #[arg(long, default_value = "f1_micro")]
    pub objective: String,
    #[arg(long, default_value_t = 5)]
    pub k_folds: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// A saved evaluation or grid-search JSON report.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TopicsTopWordsArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Words listed per topic.
    #[arg(short, long, default_value_t = 5)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ImportanceArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The `--config` file: every field optional, same names as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub topics: Option<usize>,
    pub trees: Option<usize>,
    pub threshold: Option<f64>,
    pub min_doc_tokens: Option<usize>,
    pub lexicon: Option<PathBuf>,
    pub sentiment_lexicon: Option<PathBuf>,
    pub labels: Option<String>,
    pub jobs: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub iters: Option<usize>,
    pub heldout_iters: Option<usize>,
    pub sentiment_compound_feature: Option<bool>,
    pub joint_fit: Option<bool>,
    pub multi_output_trees: Option<bool>,
}

pub struct Resolved {
    pub config: PipelineConfig,
    pub labels: Option<Vec<String>>,
}

impl CommonOpts {
    /// Merges flags over the config file over defaults into a pipeline
    /// configuration.
    pub fn resolve(&self) -> Result<Resolved> {
        let file: FileConfig = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => FileConfig::default(),
        };

        let lexicon = match self.lexicon.as_ref().or(file.lexicon.as_ref()) {
            Some(path) => {
                Lexicon::load(path).with_context(|| format!("loading lexicon {}", path.display()))?
            }
            None => match lexicon_dir_file("influence.json") {
                Some(path) => Lexicon::load(&path)
                    .with_context(|| format!("loading lexicon {}", path.display()))?,
                None => Lexicon::placeholder(),
            },
        };
        let sentiment = match self.sentiment_lexicon.as_ref().or(file.sentiment_lexicon.as_ref()) {
            Some(path) => SentimentLexicon::load(path)
                .with_context(|| format!("loading sentiment lexicon {}", path.display()))?,
            None => match lexicon_dir_file("valence.txt") {
                Some(path) => SentimentLexicon::load(&path)
                    .with_context(|| format!("loading sentiment lexicon {}", path.display()))?,
                None => SentimentLexicon::bundled(),
            },
        };

        let num_topics = self.topics.or(file.topics).unwrap_or(10);
        let defaults = PipelineConfig::default();
        let mut preprocess = defaults.preprocess;
        preprocess.min_doc_tokens = self
            .min_doc_tokens
            .or(file.min_doc_tokens)
            .unwrap_or(preprocess.min_doc_tokens);

        let config = PipelineConfig {
            preprocess,
            topics: TopicsConfig {
                num_topics,
                alpha: self.alpha.or(file.alpha),
                beta: self.beta.or(file.beta).unwrap_or(0.01),
                iters: self.iters.or(file.iters).unwrap_or(1000),
                heldout_iters: self.heldout_iters.or(file.heldout_iters).unwrap_or(50),
            },
            forest: ForestParams {
                n_trees: self.trees.or(file.trees).unwrap_or(200),
                threshold: self.threshold.or(file.threshold).unwrap_or(0.5),
                multi_output: self.multi_output_trees
                    || file.multi_output_trees.unwrap_or(false),
                n_jobs: self
                    .jobs
                    .or(file.jobs)
                    .unwrap_or_else(|| {
                        std::thread::available_parallelism()
                            .map(|n| n.get())
                            .unwrap_or(1)
                    }),
                ..ForestParams::default()
            },
            lexicon,
            sentiment,
            sentiment_compound_feature: self.sentiment_compound_feature
                || file.sentiment_compound_feature.unwrap_or(false),
            joint_fit: self.joint_fit || file.joint_fit.unwrap_or(false),
            seed: self.seed.or(file.seed).unwrap_or(0),
        };
        let labels = self
            .labels
            .clone()
            .or(file.labels)
            .map(|s| s.split(',').map(|n| n.trim().to_string()).collect());
        Ok(Resolved { config, labels })
    }
}

fn lexicon_dir_file(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("LUMEN_LEXICON_DIR")?;
    let path = PathBuf::from(dir).join(name);
    path.exists().then_some(path)
}
