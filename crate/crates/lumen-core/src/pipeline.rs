//! End-to-end two-level flow: preprocess, extract topic + dictionary +
//! sentiment features, concatenate in fixed column order, and train or
//! apply the forest.
//!
//! A trained pipeline is a sealed artifact: it embeds the fitted topic
//! model, the dictionaries, the forest, the label schema, and a snapshot of
//! the configuration it was built with. Held-out documents are featurized
//! by folding them into the frozen topic model, so test folds never touch
//! training state.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Corpus, Document, LabelSchema};
use crate::error::{Error, Result};
use crate::forest::{train_forest, FeatureMatrix, ForestModel, ForestParams};
use crate::lexicon::Lexicon;
use crate::preprocess::{
    clean_tokenize, remove_stopwords, stem, PreprocessConfig, TokenStream,
};
use crate::seed::{derive, stream};
use crate::sentiment::{score, SentimentLexicon, SentimentScores};
use crate::topics::{fit_lda, LdaParams, TopicModel};

pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicsConfig {
    pub num_topics: usize,
    /// Symmetric document-topic concentration; `None` means 50/K.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iters: usize,
    pub heldout_iters: usize,
}

impl Default for TopicsConfig {
    fn default() -> Self {
        TopicsConfig {
            num_topics: 10,
            alpha: None,
            beta: 0.01,
            iters: 1000,
            heldout_iters: 50,
        }
    }
}

impl TopicsConfig {
    pub fn alpha_value(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.num_topics as f64)
    }

    fn lda_params(&self, seed: u64) -> LdaParams {
        LdaParams {
            num_topics: self.num_topics,
            alpha: self.alpha_value(),
            beta: self.beta,
            iters: self.iters,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub preprocess: PreprocessConfig,
    pub topics: TopicsConfig,
    pub forest: ForestParams,
    pub lexicon: Lexicon,
    pub sentiment: SentimentLexicon,
    /// Include the compound score as a third sentiment feature.
    pub sentiment_compound_feature: bool,
    /// Compatibility switch for cross-validation: fit the topic model on
    /// train and test documents jointly instead of folding test documents
    /// into a frozen model.
    pub joint_fit: bool,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            preprocess: PreprocessConfig::default(),
            topics: TopicsConfig::default(),
            forest: ForestParams::default(),
            lexicon: Lexicon::placeholder(),
            sentiment: SentimentLexicon::bundled(),
            sentiment_compound_feature: false,
            joint_fit: false,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Both preprocessing paths for one document.
#[derive(Debug, Clone)]
pub struct PreparedDoc {
    /// Cleaned token count, the length the short-document filter sees.
    pub clean_len: usize,
    /// Cleaned + stemmed, stopwords retained (dictionary path).
    pub lexicon_stream: TokenStream,
    /// Cleaned - stopwords + stemmed (topic path).
    pub topic_stream: TokenStream,
}

pub fn prepare_document(raw_text: &str, config: &PreprocessConfig) -> PreparedDoc {
    let cleaned = clean_tokenize(raw_text);
    let clean_len = cleaned.len();
    let destopped = remove_stopwords(&cleaned, &config.stopwords);
    let (lexicon_stream, topic_stream) = if config.stem {
        (stem(&cleaned), stem(&destopped))
    } else {
        (cleaned, destopped)
    };
    PreparedDoc {
        clean_len,
        lexicon_stream,
        topic_stream,
    }
}

fn feature_names(config: &PipelineConfig) -> Vec<String> {
    let mut names: Vec<String> = (0..config.topics.num_topics)
        .map(|t| format!("topic_{t}"))
        .collect();
    names.extend(
        config
            .lexicon
            .category_names()
            .iter()
            .map(|c| format!("{c}_liwc")),
    );
    names.push("sentiment_pos".into());
    names.push("sentiment_neg".into());
    if config.sentiment_compound_feature {
        names.push("sentiment_compound".into());
    }
    names
}

fn assemble_row(
    theta: &[f64],
    lexicon_values: &[f64],
    sentiment: &SentimentScores,
    compound_feature: bool,
) -> Vec<f64> {
    let mut row = Vec::with_capacity(theta.len() + lexicon_values.len() + 3);
    row.extend_from_slice(theta);
    row.extend_from_slice(lexicon_values);
    row.push(sentiment.pos);
    row.push(sentiment.neg);
    if compound_feature {
        row.push(sentiment.compound);
    }
    row
}

/// The sealed train-time artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedPipeline {
    pub version: u32,
    pub schema: LabelSchema,
    pub config: PipelineConfig,
    pub config_sha256: String,
    pub topic_model: TopicModel,
    pub forest: ForestModel,
    pub feature_names: Vec<String>,
    /// Ids dropped from training by the short-document filter.
    pub dropped_ids: Vec<String>,
}

/// How to obtain a document's topic distribution during featurization.
#[derive(Debug, Clone, Copy)]
pub enum FeaturizeMode {
    /// Read the stored training distribution for the given kept-document
    /// index.
    Train(usize),
    /// Fold the document into the frozen model with this seed.
    Heldout { seed: u64 },
}

/// Prediction outcome for a single document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DocOutcome {
    Scored {
        labels: Vec<bool>,
        probabilities: Vec<f64>,
        sentiment: SentimentScores,
    },
    /// Too short after cleaning; the pipeline abstains rather than guess.
    Filtered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocPrediction {
    pub id: String,
    #[serde(flatten)]
    pub outcome: DocOutcome,
}

/// Trains the full pipeline on a labeled corpus.
pub fn train(corpus: &Corpus, config: &PipelineConfig) -> Result<TrainedPipeline> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !corpus.is_fully_labeled() {
        return Err(Error::LabelsRequired(
            "training requires a labeled corpus".into(),
        ));
    }
    let prepared: Vec<PreparedDoc> = corpus
        .documents
        .iter()
        .map(|d| prepare_document(&d.raw_text, &config.preprocess))
        .collect();
    let mut kept = Vec::new();
    let mut dropped_ids = Vec::new();
    for (i, prep) in prepared.iter().enumerate() {
        if prep.clean_len >= config.preprocess.min_doc_tokens {
            kept.push(i);
        } else {
            dropped_ids.push(corpus.documents[i].id.clone());
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let topic_streams: Vec<TokenStream> = kept
        .iter()
        .map(|&i| prepared[i].topic_stream.clone())
        .collect();
    let topic_model = fit_lda(
        &topic_streams,
        &config.topics.lda_params(derive(config.seed, stream::LDA)),
    )?;

    let names = feature_names(config);
    let mut rows = Vec::with_capacity(kept.len());
    let mut labels = Vec::with_capacity(kept.len());
    for (pos, &i) in kept.iter().enumerate() {
        let theta = topic_model.doc_topics(pos)?.theta;
        let lex = config.lexicon.extract_features(&prepared[i].lexicon_stream);
        let senti = score(&corpus.documents[i].raw_text, &config.sentiment);
        rows.push(assemble_row(
            &theta,
            &lex.values,
            &senti,
            config.sentiment_compound_feature,
        ));
        labels.push(corpus.documents[i].labels.clone().expect("checked above"));
    }
    let x = FeatureMatrix::new(rows, names.clone())?;
    let forest = train_forest(&x, &labels, corpus.schema.len(), &config.forest, config.seed)?;

    Ok(TrainedPipeline {
        version: ARTIFACT_VERSION,
        schema: corpus.schema.clone(),
        config: config.clone(),
        config_sha256: config.sha256(),
        topic_model,
        forest,
        feature_names: names,
        dropped_ids,
    })
}

impl TrainedPipeline {
    pub fn num_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Builds one feature row; `None` when the document fails the
    /// short-document filter.
    pub fn featurize(&self, doc: &Document, mode: FeaturizeMode) -> Result<Option<Vec<f64>>> {
        let prep = prepare_document(&doc.raw_text, &self.config.preprocess);
        if prep.clean_len < self.config.preprocess.min_doc_tokens {
            return Ok(None);
        }
        let theta = match mode {
            FeaturizeMode::Train(index) => self.topic_model.doc_topics(index)?.theta,
            FeaturizeMode::Heldout { seed } => self
                .topic_model
                .infer_heldout(&prep.topic_stream, self.config.topics.heldout_iters, seed)
                .theta,
        };
        let lex = self.config.lexicon.extract_features(&prep.lexicon_stream);
        let senti = score(&doc.raw_text, &self.config.sentiment);
        Ok(Some(assemble_row(
            &theta,
            &lex.values,
            &senti,
            self.config.sentiment_compound_feature,
        )))
    }

    /// Predicts cue bits, probabilities, and sentiment for each document.
    /// Documents failing the length filter come back as `Filtered`.
    pub fn predict(&self, documents: &[Document]) -> Result<Vec<DocPrediction>> {
        let mut out = Vec::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            let seed = derive(self.config.seed, stream::HELDOUT ^ (i as u64) << 16);
            let row = self.featurize(doc, FeaturizeMode::Heldout { seed })?;
            let outcome = match row {
                None => DocOutcome::Filtered,
                Some(row) => {
                    let probabilities = self.forest.predict_row(&row);
                    let labels = probabilities
                        .iter()
                        .map(|&p| p >= self.forest.params.threshold)
                        .collect();
                    DocOutcome::Scored {
                        labels,
                        probabilities,
                        sentiment: score(&doc.raw_text, &self.config.sentiment),
                    }
                }
            };
            out.push(DocPrediction {
                id: doc.id.clone(),
                outcome,
            });
        }
        Ok(out)
    }

    /// Canonical JSON bytes; reruns with the same inputs and seed produce
    /// identical bytes.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        Ok(serde_json::to_vec(self)?)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let pipeline: TrainedPipeline = serde_json::from_slice(bytes)?;
        if pipeline.version != ARTIFACT_VERSION {
            return Err(Error::Config(format!(
                "unsupported artifact version {}",
                pipeline.version
            )));
        }
        Ok(pipeline)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}
