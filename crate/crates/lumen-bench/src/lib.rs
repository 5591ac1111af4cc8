//! Shared fixtures for the benchmark suite.

use lumen_core::eval::{gen_synthetic, SyntheticSpec};
use lumen_core::Corpus;

/// Deterministic benchmark corpus.
pub fn bench_corpus(docs: usize) -> Corpus {
    gen_synthetic(&SyntheticSpec {
        docs,
        topics: 4,
        seed: 1234,
        ..SyntheticSpec::default()
    })
    .expect("valid spec")
    .0
}
