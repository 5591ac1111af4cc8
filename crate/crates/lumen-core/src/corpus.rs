//! Labeled text corpora: the label schema, documents, ingestion from JSONL
//! and CSV, and deterministic k-fold splitting.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// The default cue set: six persuasion principles, three subcategories,
/// framing, slant, blame, and emphasis.
pub const DEFAULT_CUES: [&str; 15] = [
    "authority",
    "reciprocation",
    "commitment",
    "indignation",
    "call_to_action",
    "liking",
    "scarcity",
    "social_proof",
    "admonition",
    "gain",
    "loss",
    "subjectivity",
    "objectivity",
    "blame_guilt",
    "emphasis",
];

/// Ordered, fixed set of cue names. A label's index is its position here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSchema {
    names: Vec<String>,
}

impl LabelSchema {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::SchemaMismatch("schema has no labels".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(Error::SchemaMismatch("empty label name".into()));
            }
            if !n
                .bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
            {
                return Err(Error::SchemaMismatch(format!(
                    "label name not lowercase snake_case: {n}"
                )));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::SchemaMismatch(format!("duplicate label name: {n}")));
            }
        }
        Ok(LabelSchema { names })
    }

    pub fn default_cues() -> Self {
        LabelSchema::new(DEFAULT_CUES.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One text item, optionally carrying a gold cue bit-vector aligned to the
/// corpus schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub raw_text: String,
    pub labels: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub schema: LabelSchema,
    pub documents: Vec<Document>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl Corpus {
    pub fn new(schema: LabelSchema, documents: Vec<Document>) -> Result<Self> {
        let mut ids = HashSet::new();
        for doc in &documents {
            if !ids.insert(doc.id.clone()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
            if let Some(labels) = &doc.labels {
                if labels.len() != schema.len() {
                    return Err(Error::SchemaMismatch(format!(
                        "document {}: {} label bits for a {}-label schema",
                        doc.id,
                        labels.len(),
                        schema.len()
                    )));
                }
            }
        }
        Ok(Corpus { schema, documents })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn is_fully_labeled(&self) -> bool {
        !self.is_empty() && self.documents.iter().all(|d| d.labels.is_some())
    }

    /// New corpus holding clones of the documents at `indices`, same schema.
    pub fn subset(&self, indices: &[usize]) -> Corpus {
        Corpus {
            schema: self.schema.clone(),
            documents: indices.iter().map(|&i| self.documents[i].clone()).collect(),
        }
    }
}

/// Loads a corpus against a declared schema.
///
/// JSONL: one object per line with `id`, `text`, and an optional `labels`
/// object of name -> 0/1; names absent from a present `labels` object count
/// as 0. CSV: header row with `text`, optional `id`, and one 0/1 column per
/// label.
pub fn load_corpus(path: &Path, format: CorpusFormat, schema: &LabelSchema) -> Result<Corpus> {
    match format {
        CorpusFormat::Jsonl => load_jsonl(path, schema),
        CorpusFormat::Csv => load_csv(path, schema),
    }
}

/// Reads the schema implied by a JSONL corpus file: label names in order of
/// first appearance across lines. Returns `None` when no line carries labels.
pub fn infer_schema(path: &Path) -> Result<Option<LabelSchema>> {
    let file = File::open(path)?;
    let mut names: Vec<String> = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        if let Some(labels) = value.get("labels").and_then(|v| v.as_object()) {
            for key in labels.keys() {
                if !names.iter().any(|n| n == key) {
                    names.push(key.clone());
                }
            }
        }
    }
    if names.is_empty() {
        Ok(None)
    } else {
        Ok(Some(LabelSchema::new(names)?))
    }
}

fn parse_label_bit(value: &Value, context: &str) -> Result<bool> {
    match value.as_i64() {
        Some(0) => Ok(false),
        Some(1) => Ok(true),
        _ => Err(Error::LabelOutOfRange(format!("{context}: {value}"))),
    }
}

fn load_jsonl(path: &Path, schema: &LabelSchema) -> Result<Corpus> {
    let file = File::open(path)?;
    let mut documents = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let id = value
            .get("id")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: "missing string field `id`".into(),
            })?
            .to_string();
        let text = value
            .get("text")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: "missing string field `text`".into(),
            })?
            .to_string();
        let labels = match value.get("labels") {
            None | Some(Value::Null) => None,
            Some(Value::Object(map)) => {
                let mut bits = vec![false; schema.len()];
                for (name, bit) in map {
                    let idx = schema
                        .index_of(name)
                        .ok_or_else(|| Error::UnknownLabel(name.clone()))?;
                    bits[idx] = parse_label_bit(bit, &format!("line {}, label {name}", lineno + 1))?;
                }
                Some(bits)
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("`labels` must be an object, got {other}"),
                })
            }
        };
        documents.push(Document {
            id,
            raw_text: text,
            labels,
        });
    }
    Corpus::new(schema.clone(), documents)
}

fn load_csv(path: &Path, schema: &LabelSchema) -> Result<Corpus> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let text_col = headers
        .iter()
        .position(|h| h == "text")
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing required `text` column".into(),
        })?;
    let id_col = headers.iter().position(|h| h == "id");
    let mut label_cols = Vec::new();
    for (i, h) in headers.iter().enumerate() {
        if Some(i) == id_col || i == text_col {
            continue;
        }
        let idx = schema
            .index_of(h)
            .ok_or_else(|| Error::UnknownLabel(h.to_string()))?;
        label_cols.push((i, idx));
    }
    let mut documents = Vec::new();
    for (rowno, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: rowno + 2,
            message: e.to_string(),
        })?;
        let id = match id_col {
            Some(c) => record.get(c).unwrap_or("").to_string(),
            None => format!("row{rowno}"),
        };
        let text = record.get(text_col).unwrap_or("").to_string();
        let labels = if label_cols.is_empty() {
            None
        } else {
            let mut bits = vec![false; schema.len()];
            for &(col, idx) in &label_cols {
                let raw = record.get(col).unwrap_or("").trim();
                bits[idx] = match raw {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(Error::LabelOutOfRange(format!(
                            "line {}, column {}: {other:?}",
                            rowno + 2,
                            headers.get(col).unwrap_or("?")
                        )))
                    }
                };
            }
            Some(bits)
        };
        documents.push(Document {
            id,
            raw_text: text,
            labels,
        });
    }
    Corpus::new(schema.clone(), documents)
}

/// Writes a corpus as JSONL, one document per line, labels keyed by name in
/// schema order.
pub fn save_corpus_jsonl<W: Write>(corpus: &Corpus, writer: &mut W) -> Result<()> {
    for doc in &corpus.documents {
        let mut obj = serde_json::Map::new();
        obj.insert("id".into(), json!(doc.id));
        obj.insert("text".into(), json!(doc.raw_text));
        if let Some(bits) = &doc.labels {
            let mut labels = serde_json::Map::new();
            for (name, &bit) in corpus.schema.names().iter().zip(bits) {
                labels.insert(name.clone(), json!(u8::from(bit)));
            }
            obj.insert("labels".into(), Value::Object(labels));
        }
        serde_json::to_writer(&mut *writer, &Value::Object(obj))?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_corpus_jsonl_path(corpus: &Corpus, path: &Path) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path)?);
    save_corpus_jsonl(corpus, &mut writer)?;
    writer.flush()?;
    Ok(())
}

/// Deterministic k-fold split: shuffles `0..len` with ChaCha8 seeded by
/// `seed`, then deals contiguous blocks whose sizes differ by at most one.
///
/// Returns `(train_indices, test_indices)` pairs; the test sets partition
/// the index range.
pub fn kfold_split(len: usize, k: usize, seed: u64) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if k < 2 {
        return Err(Error::Config(format!("k must be at least 2, got {k}")));
    }
    if k > len {
        return Err(Error::Config(format!(
            "k = {k} exceeds corpus size D = {len}"
        )));
    }
    let mut order: Vec<usize> = (0..len).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let base = len / k;
    let extra = len % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < extra);
        let mut test: Vec<usize> = order[start..start + size].to_vec();
        let mut train: Vec<usize> = order[..start]
            .iter()
            .chain(order[start + size..].iter())
            .copied()
            .collect();
        test.sort_unstable();
        train.sort_unstable();
        folds.push((train, test));
        start += size;
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write as _;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn tiny_schema() -> LabelSchema {
        LabelSchema::new(vec!["authority".into(), "scarcity".into()]).unwrap()
    }

    #[test]
    fn jsonl_line_maps_to_document() {
        let f = write_temp(r#"{"id":"a","text":"hello","labels":{"authority":1,"scarcity":0}}"#);
        let corpus = load_corpus(f.path(), CorpusFormat::Jsonl, &tiny_schema()).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.documents[0].labels, Some(vec![true, false]));
    }

    #[test]
    fn empty_file_gives_empty_corpus() {
        let f = write_temp("");
        let corpus = load_corpus(f.path(), CorpusFormat::Jsonl, &tiny_schema()).unwrap();
        assert_eq!(corpus.len(), 0);
    }

    #[test]
    fn label_value_out_of_range_is_rejected() {
        let f = write_temp(r#"{"id":"a","text":"x","labels":{"authority":2}}"#);
        let err = load_corpus(f.path(), CorpusFormat::Jsonl, &tiny_schema()).unwrap_err();
        assert!(matches!(err, Error::LabelOutOfRange(_)), "{err}");
    }

    #[test]
    fn unknown_label_and_duplicate_id_are_rejected() {
        let f = write_temp(r#"{"id":"a","text":"x","labels":{"bogus":1}}"#);
        let err = load_corpus(f.path(), CorpusFormat::Jsonl, &tiny_schema()).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel(_)), "{err}");

        let f = write_temp("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}");
        let err = load_corpus(f.path(), CorpusFormat::Jsonl, &tiny_schema()).unwrap_err();
        assert!(matches!(err, Error::DuplicateId(_)), "{err}");
    }

    #[test]
    fn parse_error_reports_line_number() {
        let f = write_temp("{\"id\":\"a\",\"text\":\"x\"}\nnot json");
        let err = load_corpus(f.path(), CorpusFormat::Jsonl, &tiny_schema()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn csv_round_trips_labels() {
        let f = write_temp("id,text,authority,scarcity\nd1,\"hello, there\",1,0\nd2,more text,0,1\n");
        let corpus = load_corpus(f.path(), CorpusFormat::Csv, &tiny_schema()).unwrap();
        assert_eq!(corpus.documents[0].raw_text, "hello, there");
        assert_eq!(corpus.documents[0].labels, Some(vec![true, false]));
        assert_eq!(corpus.documents[1].labels, Some(vec![false, true]));
    }

    #[test]
    fn jsonl_save_load_round_trip() {
        let schema = tiny_schema();
        let corpus = Corpus::new(
            schema.clone(),
            vec![
                Document {
                    id: "a".into(),
                    raw_text: "first \"quoted\" text".into(),
                    labels: Some(vec![true, false]),
                },
                Document {
                    id: "b".into(),
                    raw_text: "unlabeled".into(),
                    labels: None,
                },
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        save_corpus_jsonl(&corpus, &mut buf).unwrap();
        let f = write_temp(std::str::from_utf8(&buf).unwrap());
        let loaded = load_corpus(f.path(), CorpusFormat::Jsonl, &schema).unwrap();
        assert_eq!(loaded, corpus);
    }

    #[test]
    fn infer_schema_first_appearance_order() {
        let f = write_temp(concat!(
            "{\"id\":\"a\",\"text\":\"x\",\"labels\":{\"zeta\":1,\"alpha\":0}}\n",
            "{\"id\":\"b\",\"text\":\"y\",\"labels\":{\"alpha\":1,\"mid\":0}}\n",
        ));
        let schema = infer_schema(f.path()).unwrap().unwrap();
        assert_eq!(schema.names(), ["zeta", "alpha", "mid"]);
    }

    #[test]
    fn kfold_sizes_and_determinism() {
        let folds = kfold_split(10, 5, 7).unwrap();
        assert_eq!(folds.len(), 5);
        for (_, test) in &folds {
            assert_eq!(test.len(), 2);
        }
        let mut seen: Vec<usize> = folds.iter().flat_map(|(_, t)| t.clone()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());

        let folds11 = kfold_split(11, 5, 7).unwrap();
        let mut sizes: Vec<usize> = folds11.iter().map(|(_, t)| t.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 2, 2, 3]);

        assert_eq!(kfold_split(10, 5, 7).unwrap(), folds);
        assert!(kfold_split(3, 5, 7).is_err());
    }

    proptest! {
        #[test]
        fn kfold_partitions_indices(len in 2usize..60, k in 2usize..10, seed: u64) {
            prop_assume!(k <= len);
            let folds = kfold_split(len, k, seed).unwrap();
            let mut all_test: Vec<usize> = Vec::new();
            for (train, test) in &folds {
                prop_assert!(train.iter().all(|i| !test.contains(i)));
                let mut union: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
                union.sort_unstable();
                prop_assert_eq!(union, (0..len).collect::<Vec<_>>());
                all_test.extend_from_slice(test);
            }
            all_test.sort_unstable();
            prop_assert_eq!(all_test, (0..len).collect::<Vec<_>>());
        }
    }
}
