//! Influence-cue extraction and prediction.
//!
//! A two-level architecture: the first level turns raw text into topic
//! structure (LDA via collapsed Gibbs sampling), dictionary-category
//! densities, and sentiment salience; the second level feeds the
//! concatenated features to a multi-label random forest. The crate also
//! ships the evaluation harness used to exercise it: k-fold
//! cross-validation, grid search, macro/micro F1, a fair-coin baseline,
//! a label-constrained topic-model baseline, and a synthetic-corpus
//! generator with planted ground truth.
//!
//! All randomness flows through ChaCha8 generators seeded from a single
//! `u64`, so every fit, split, and prediction is reproducible bit for bit.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod forest;
pub mod lexicon;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod seed;
pub mod sentiment;
pub mod stem;
pub mod topics;

pub use corpus::{Corpus, CorpusFormat, Document, LabelSchema};
pub use error::{Error, Result};
pub use eval::{EvalReport, GridSpec, Objective, SyntheticSpec};
pub use forest::{FeatureMatrix, ForestModel, ForestParams, PredictionSet};
pub use lexicon::Lexicon;
pub use pipeline::{DocOutcome, DocPrediction, PipelineConfig, TrainedPipeline};
pub use preprocess::{PreprocessConfig, TokenStream};
pub use sentiment::{SentimentLexicon, SentimentScores};
pub use topics::{LabeledLda, TopicDistribution, TopicModel};
