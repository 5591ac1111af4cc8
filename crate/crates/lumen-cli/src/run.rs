//! Command implementations.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use lumen_core::corpus::{infer_schema, load_corpus, save_corpus_jsonl_path, CorpusFormat};
use lumen_core::eval::{
    cross_validate, cross_validate_labeled_lda, cross_validate_naive, gen_synthetic, grid_search,
    EvalReport, GridSpec, Objective, SyntheticSpec,
};
use lumen_core::pipeline::{prepare_document, train, DocOutcome, TrainedPipeline};
use lumen_core::report::{
    render_comparison, render_grid, render_importance_csv, render_report, render_top_words,
};
use lumen_core::{Corpus, Document, LabelSchema};

use crate::opts::*;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenSynth(args) => gen_synth(args),
        Command::Preprocess(args) => preprocess(args),
        Command::Train(args) => do_train(args),
        Command::Predict(args) => predict(args),
        Command::Evaluate(args) => evaluate(args),
        Command::GridSearch(args) => do_grid_search(args),
        Command::Report(args) => report(args),
        Command::TopicsTopWords(args) => topics_top_words(args),
        Command::Importance(args) => importance(args),
    }
}

fn corpus_format(path: &Path) -> CorpusFormat {
    if path.extension().map(|e| e == "csv").unwrap_or(false) {
        CorpusFormat::Csv
    } else {
        CorpusFormat::Jsonl
    }
}

fn load_with_schema(path: &Path, labels: &Option<Vec<String>>) -> Result<Corpus> {
    let schema = match labels {
        Some(names) => LabelSchema::new(names.clone())?,
        None => infer_schema(path)?.ok_or_else(|| {
            anyhow::anyhow!(
                "{}: no labels found; pass --labels or provide a labeled corpus",
                path.display()
            )
        })?,
    };
    Ok(load_corpus(path, corpus_format(path), &schema)?)
}

fn write_output(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => write_output(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn gen_synth(args: GenSynthArgs) -> Result<()> {
    let mut spec: SyntheticSpec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading spec {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SyntheticSpec::default(),
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let (corpus, truths) = gen_synthetic(&spec)?;
    save_corpus_jsonl_path(&corpus, &args.out)?;
    let truth_path = args
        .truth_out
        .unwrap_or_else(|| PathBuf::from(format!("{}.truth.jsonl", args.out.display())));
    let mut buf = Vec::new();
    for truth in &truths {
        serde_json::to_writer(&mut buf, truth)?;
        buf.push(b'\n');
    }
    fs::write(&truth_path, buf)?;
    println!(
        "wrote {} documents to {} (truth sidecar: {})",
        corpus.len(),
        args.out.display(),
        truth_path.display()
    );
    Ok(())
}

fn preprocess(args: PreprocessArgs) -> Result<()> {
    let resolved = args.common.resolve()?;
    // Preprocessing needs no labels; fall back to a throwaway schema.
    let schema = match &resolved.labels {
        Some(names) => LabelSchema::new(names.clone())?,
        None => infer_schema(&args.corpus)?
            .unwrap_or_else(|| LabelSchema::new(vec!["unlabeled".into()]).unwrap()),
    };
    let corpus = load_corpus(&args.corpus, corpus_format(&args.corpus), &schema)?;
    let mut buf = String::new();
    let mut kept = 0usize;
    for doc in &corpus.documents {
        let prep = prepare_document(&doc.raw_text, &resolved.config.preprocess);
        let keep = prep.clean_len >= resolved.config.preprocess.min_doc_tokens;
        kept += usize::from(keep);
        let line = json!({
            "id": doc.id,
            "kept": keep,
            "m_d": prep.clean_len,
            "lexicon_tokens": prep.lexicon_stream.tokens,
            "topic_tokens": prep.topic_stream.tokens,
        });
        buf.push_str(&serde_json::to_string(&line)?);
        buf.push('\n');
    }
    write_output(&args.out, &buf)?;
    println!(
        "preprocessed {} documents ({} kept) -> {}",
        corpus.len(),
        kept,
        args.out.display()
    );
    Ok(())
}

fn do_train(args: TrainArgs) -> Result<()> {
    let resolved = args.common.resolve()?;
    let corpus = load_with_schema(&args.corpus, &resolved.labels)?;
    let pipeline = train(&corpus, &resolved.config)?;
    pipeline.save(&args.out)?;
    println!(
        "trained on {} documents ({} dropped as too short), {} features, {} labels -> {}",
        corpus.len() - pipeline.dropped_ids.len(),
        pipeline.dropped_ids.len(),
        pipeline.num_features(),
        pipeline.schema.len(),
        args.out.display()
    );
    Ok(())
}

/// Lenient document reader for prediction inputs: only `id` and `text` are
/// required, any `labels` field is ignored.
fn load_documents(path: &Path) -> Result<Vec<Document>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut docs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line)
            .with_context(|| format!("{}:{}: invalid JSON", path.display(), lineno + 1))?;
        let id = value
            .get("id")
            .and_then(Value::as_str)
            .with_context(|| format!("{}:{}: missing `id`", path.display(), lineno + 1))?;
        let text = value
            .get("text")
            .and_then(Value::as_str)
            .with_context(|| format!("{}:{}: missing `text`", path.display(), lineno + 1))?;
        docs.push(Document {
            id: id.to_string(),
            raw_text: text.to_string(),
            labels: None,
        });
    }
    Ok(docs)
}

fn predict(args: PredictArgs) -> Result<()> {
    let pipeline = TrainedPipeline::load(&args.model)
        .with_context(|| format!("loading model {}", args.model.display()))?;
    let docs = load_documents(&args.input)?;
    let predictions = pipeline.predict(&docs)?;
    let names = pipeline.schema.names();
    let mut buf = Vec::new();
    let mut scored = 0usize;
    for pred in &predictions {
        let line = match &pred.outcome {
            DocOutcome::Scored {
                labels,
                probabilities,
                sentiment,
            } => {
                scored += 1;
                let mut label_obj = serde_json::Map::new();
                let mut prob_obj = serde_json::Map::new();
                for (i, name) in names.iter().enumerate() {
                    label_obj.insert(name.clone(), json!(u8::from(labels[i])));
                    prob_obj.insert(name.clone(), json!(probabilities[i]));
                }
                json!({
                    "id": pred.id,
                    "status": "scored",
                    "labels": label_obj,
                    "probabilities": prob_obj,
                    "sentiment": {
                        "pos": sentiment.pos,
                        "neg": sentiment.neg,
                        "neu": sentiment.neu,
                        "compound": sentiment.compound,
                    },
                })
            }
            DocOutcome::Filtered => json!({
                "id": pred.id,
                "status": "filtered",
            }),
        };
        serde_json::to_writer(&mut buf, &line)?;
        buf.push(b'\n');
    }
    fs::write(&args.out, buf)?;
    println!(
        "scored {scored}/{} documents -> {}",
        predictions.len(),
        args.out.display()
    );
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let resolved = args.common.resolve()?;
    let (config, label_hint) = match &args.model {
        Some(path) => {
            let pipeline = TrainedPipeline::load(path)
                .with_context(|| format!("loading model {}", path.display()))?;
            let names = pipeline.schema.names().to_vec();
            let mut config = pipeline.config;
            // Flags still win over the stored snapshot where given.
            if let Some(seed) = args.common.seed {
                config.seed = seed;
            }
            (config, Some(names))
        }
        None => (resolved.config, resolved.labels),
    };
    let corpus = load_with_schema(&args.corpus, &label_hint)?;
    let seed = config.seed;

    let lumen = cross_validate(&corpus, &config, args.k_folds, seed)?;
    let mut reports: Vec<EvalReport> = vec![lumen];
    if !args.no_baselines {
        reports.push(cross_validate_labeled_lda(
            &corpus,
            &config,
            args.k_folds,
            seed,
        )?);
        reports.push(cross_validate_naive(&corpus, args.k_folds, seed)?);
    }

    let refs: Vec<&EvalReport> = reports.iter().collect();
    let table = render_comparison(&refs);
    let detail = render_report(&reports[0]);
    let json_out = serde_json::to_string_pretty(&json!({ "reports": reports }))?;
    if let Some(path) = &args.out {
        write_output(path, &json_out)?;
    }
    print!("{table}\n{detail}");
    Ok(())
}

fn do_grid_search(args: GridSearchArgs) -> Result<()> {
    let resolved = args.common.resolve()?;
    let corpus = load_with_schema(&args.corpus, &resolved.labels)?;
    let parse_axis = |raw: &str, name: &str| -> Result<Vec<usize>> {
        raw.split(',')
            .map(|v| {
                v.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad {name} value {v:?}"))
            })
            .collect()
    };
    let grid = GridSpec {
        topics: parse_axis(&args.grid_topics, "--grid-topics")?,
        trees: parse_axis(&args.grid_trees, "--grid-trees")?,
    };
    let objective = match args.objective.as_str() {
        "f1_micro" => Objective::F1Micro,
        "f1_macro" => Objective::F1Macro,
        other => bail!("unknown objective {other:?}; use f1_micro or f1_macro"),
    };
    let result = grid_search(
        &corpus,
        &resolved.config,
        &grid,
        args.k_folds,
        resolved.config.seed,
        objective,
    )?;
    if let Some(path) = &args.out {
        write_output(path, &serde_json::to_string_pretty(&result)?)?;
    }
    print!("{}", render_grid(&result));
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let value: Value = serde_json::from_str(&text)?;
    let rendered = if let Some(reports) = value.get("reports") {
        let reports: Vec<EvalReport> = serde_json::from_value(reports.clone())?;
        let refs: Vec<&EvalReport> = reports.iter().collect();
        let mut out = render_comparison(&refs);
        for report in &reports {
            out.push('\n');
            out.push_str(&render_report(report));
        }
        out
    } else if value.get("cells").is_some() {
        render_grid(&serde_json::from_value(value)?)
    } else {
        render_report(&serde_json::from_value(value)?)
    };
    emit(&args.out, &rendered)
}

fn topics_top_words(args: TopicsTopWordsArgs) -> Result<()> {
    let pipeline = TrainedPipeline::load(&args.model)
        .with_context(|| format!("loading model {}", args.model.display()))?;
    emit(&args.out, &render_top_words(&pipeline.topic_model, args.k))
}

fn importance(args: ImportanceArgs) -> Result<()> {
    let pipeline = TrainedPipeline::load(&args.model)
        .with_context(|| format!("loading model {}", args.model.display()))?;
    emit(
        &args.out,
        &render_importance_csv(&pipeline.forest.importance_report()),
    )
}
