//! Language identification with random-indexing hypervectors.
//!
//! Letters are given fixed random ±1 labels. Each block of `n` consecutive
//! letters is encoded by permuting and binding the labels, a text becomes the
//! sum of its block vectors, and a language profile is the sum of the text
//! vectors of its training samples. Unknown text is assigned to the profile
//! with the highest cosine similarity.
//!
//! ```
//! use hdlang::{EncoderConfig, LanguageModel};
//!
//! let cfg = EncoderConfig::new(3, 1_000, 1).unwrap();
//! let model = LanguageModel::build(
//!     vec![
//!         ("eng".to_string(), vec!["the cat sat on the mat with the hat".to_string()]),
//!         ("deu".to_string(), vec!["die katze sitzt auf der matte mit dem hut".to_string()]),
//!     ],
//!     cfg,
//! )
//! .unwrap();
//! let ranking = model.classify("the hat on the cat").unwrap();
//! assert_eq!(ranking.best().0, "eng");
//! ```

pub mod classify;
pub mod corpus;
pub mod encoder;
pub mod error;
pub mod eval;
pub mod format;
pub mod hv;
mod kernels;
pub mod model;
pub mod normalize;

pub use classify::{Ranking, SimilarityMatrix};
pub use corpus::{LabeledCorpus, Sample};
pub use encoder::{Encoder, EncoderConfig, LabelSet, RollingEncoder, TextVector, Throughput};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, SweepRow};
pub use hv::{BipolarLabel, Hypervector, Permutation, SeededRng};
pub use model::{LanguageModel, LanguageVector, TrainingReport};
pub use normalize::{normalize, AlphabetConfig, Symbol, SymbolSequence};
