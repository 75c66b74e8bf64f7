//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use hdlang::{EncoderConfig, LabeledCorpus, LanguageModel};

pub fn desk_corpus(split: &str) -> LabeledCorpus {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus/desk")
        .join(split);
    LabeledCorpus::load(dir).expect("desk corpus")
}

/// A model trained on the desk training split.
pub fn desk_model(n: usize, dim: usize) -> LanguageModel {
    let config = EncoderConfig::new(n, dim, 1).expect("valid config");
    LanguageModel::build(desk_corpus("train").by_language(), config).expect("trainable corpus")
}
