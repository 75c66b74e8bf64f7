//! Language vectors and trained models.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::encoder::{Encoder, EncoderConfig};
use crate::error::{Error, Result};
use crate::hv::Hypervector;

/// Unnormalized sum of the text vectors of one language's training samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageVector {
    pub name: String,
    pub vector: Hypervector,
    pub sample_count: u32,
    pub byte_count: u64,
}

impl LanguageVector {
    /// Folds another vector of the same language into this one.
    pub fn merge(&mut self, other: &LanguageVector) {
        self.vector.accumulate(&other.vector);
        self.sample_count += other.sample_count;
        self.byte_count += other.byte_count;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingReport {
    pub name: String,
    pub samples_used: usize,
    pub samples_skipped: usize,
    pub byte_count: u64,
    pub blocks: u64,
}

#[derive(Default)]
struct Partial {
    acc: Option<Hypervector>,
    used: usize,
    skipped: usize,
    bytes: u64,
    blocks: u64,
}

impl Partial {
    fn combine(mut self, other: Partial) -> Partial {
        self.acc = match (self.acc, other.acc) {
            (Some(mut a), Some(b)) => {
                a.accumulate(&b);
                Some(a)
            }
            (a, b) => a.or(b),
        };
        self.used += other.used;
        self.skipped += other.skipped;
        self.bytes += other.bytes;
        self.blocks += other.blocks;
        self
    }
}

/// Bundles the text vectors of every usable sample.
///
/// Samples that normalize to nothing or are too short for one block are
/// skipped and counted. Sample encoding runs in parallel; the reduction is
/// exact integer addition, so the result does not depend on scheduling.
pub fn train_language<S: AsRef<str> + Sync>(
    name: &str,
    samples: &[S],
    encoder: &Encoder,
) -> Result<(LanguageVector, TrainingReport)> {
    let dim = encoder.dim();
    let partial = samples
        .par_iter()
        .fold(Partial::default, |mut part, raw| {
            let raw = raw.as_ref();
            let seq = encoder.normalize(raw);
            if seq.is_empty() {
                part.skipped += 1;
                return part;
            }
            let acc = part.acc.get_or_insert_with(|| Hypervector::zeros(dim));
            match encoder.accumulate_text(&seq, acc) {
                Ok(blocks) => {
                    part.used += 1;
                    part.bytes += raw.len() as u64;
                    part.blocks += blocks as u64;
                }
                Err(_) => part.skipped += 1,
            }
            part
        })
        .reduce(Partial::default, Partial::combine);

    let vector = match partial.acc {
        Some(v) if partial.used > 0 => v,
        _ => {
            return Err(Error::NoValidSamples {
                language: name.to_string(),
                skipped: partial.skipped,
            })
        }
    };
    let sample_count = u32::try_from(partial.used)
        .map_err(|_| Error::Config(format!("{name}: too many training samples")))?;
    Ok((
        LanguageVector {
            name: name.to_string(),
            vector,
            sample_count,
            byte_count: partial.bytes,
        },
        TrainingReport {
            name: name.to_string(),
            samples_used: partial.used,
            samples_skipped: partial.skipped,
            byte_count: partial.bytes,
            blocks: partial.blocks,
        },
    ))
}

/// Encoder basis plus one named vector per language.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageModel {
    encoder: Encoder,
    languages: Vec<LanguageVector>,
}

impl LanguageModel {
    /// Trains one language vector per `(name, samples)` entry, in the given
    /// order, sharing the labels and permutation drawn from `cfg.seed`.
    pub fn build<S: AsRef<str> + Sync>(
        per_language: Vec<(String, Vec<S>)>,
        cfg: EncoderConfig,
    ) -> Result<Self> {
        Self::build_with_report(per_language, cfg).map(|(m, _)| m)
    }

    pub fn build_with_report<S: AsRef<str> + Sync>(
        per_language: Vec<(String, Vec<S>)>,
        cfg: EncoderConfig,
    ) -> Result<(Self, Vec<TrainingReport>)> {
        if per_language.len() < 2 {
            return Err(Error::TooFewLanguages(per_language.len()));
        }
        check_unique(per_language.iter().map(|(name, _)| name.as_str()))?;
        let encoder = Encoder::new(cfg)?;
        let trained: Vec<(LanguageVector, TrainingReport)> = per_language
            .par_iter()
            .map(|(name, samples)| train_language(name, samples, &encoder))
            .collect::<Result<_>>()?;
        let (languages, reports) = trained.into_iter().unzip();
        Ok((LanguageModel { encoder, languages }, reports))
    }

    /// Assembles a model from an encoder and trained vectors.
    pub fn from_parts(encoder: Encoder, languages: Vec<LanguageVector>) -> Result<Self> {
        if languages.len() < 2 {
            return Err(Error::invariant(
                "language count",
                format!("{} languages, at least 2 required", languages.len()),
            ));
        }
        if let Err(Error::DuplicateLanguage(name)) =
            check_unique(languages.iter().map(|l| l.name.as_str()))
        {
            return Err(Error::invariant(
                "unique language names",
                format!("{name:?} appears twice"),
            ));
        }
        for lang in &languages {
            if lang.vector.dim() != encoder.dim() {
                return Err(Error::invariant(
                    "dimension agreement",
                    format!(
                        "{} has {} components, expected {}",
                        lang.name,
                        lang.vector.dim(),
                        encoder.dim()
                    ),
                ));
            }
            if lang.sample_count == 0 {
                return Err(Error::invariant(
                    "sample count",
                    format!("{} was trained on no samples", lang.name),
                ));
            }
        }
        Ok(LanguageModel { encoder, languages })
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn config(&self) -> &EncoderConfig {
        self.encoder.config()
    }

    pub fn languages(&self) -> &[LanguageVector] {
        &self.languages
    }

    pub fn language_names(&self) -> impl Iterator<Item = &str> {
        self.languages.iter().map(|l| l.name.as_str())
    }

    pub fn language(&self, name: &str) -> Result<&LanguageVector> {
        self.languages
            .iter()
            .find(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLanguage(name.to_string()))
    }

    pub fn language_mut(&mut self, name: &str) -> Result<&mut LanguageVector> {
        self.languages
            .iter_mut()
            .find(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLanguage(name.to_string()))
    }
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(Error::DuplicateLanguage(name.to_string()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encoder() -> Encoder {
        Encoder::new(EncoderConfig::new(3, 512, 5).unwrap()).unwrap()
    }

    #[test]
    fn one_sample_is_its_text_vector() {
        let e = encoder();
        let (lv, report) = train_language("eng", &["the cat sat"], &e).unwrap();
        assert_eq!(lv.vector, e.encode_str("the cat sat").unwrap().vector);
        assert_eq!(lv.sample_count, 1);
        assert_eq!(lv.byte_count, 11);
        assert_eq!(report.blocks, 11);
    }

    #[test]
    fn two_samples_sum_in_any_order() {
        let e = encoder();
        let a = "quick brown fox";
        let b = "lazy dog";
        let (ab, _) = train_language("x", &[a, b], &e).unwrap();
        let (ba, _) = train_language("x", &[b, a], &e).unwrap();
        let expected = e
            .encode_str(a)
            .unwrap()
            .vector
            .bundle(&e.encode_str(b).unwrap().vector);
        assert_eq!(ab.vector, expected);
        assert_eq!(ab, ba);
    }

    #[test]
    fn unusable_samples_are_skipped() {
        let e = Encoder::new(EncoderConfig::new(5, 64, 5).unwrap()).unwrap();
        let (lv, report) = train_language("x", &["", "!!", "ab", "hello there"], &e).unwrap();
        assert_eq!(lv.sample_count, 1);
        assert_eq!(report.samples_skipped, 3);
        let err = train_language("x", &["", "ab"], &e).unwrap_err();
        assert!(matches!(err, Error::NoValidSamples { skipped: 2, .. }));
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let cfg = EncoderConfig::new(3, 64, 1).unwrap();
        let one = vec![("eng".to_string(), vec!["hello"])];
        assert!(matches!(
            LanguageModel::build(one, cfg.clone()),
            Err(Error::TooFewLanguages(1))
        ));
        let dup = vec![
            ("eng".to_string(), vec!["hello"]),
            ("eng".to_string(), vec!["world"]),
        ];
        assert!(matches!(
            LanguageModel::build(dup, cfg.clone()),
            Err(Error::DuplicateLanguage(_))
        ));
        let empty = vec![
            ("eng".to_string(), vec!["hello"]),
            ("fra".to_string(), vec!["..."]),
        ];
        match LanguageModel::build(empty, cfg) {
            Err(Error::NoValidSamples { language, .. }) => assert_eq!(language, "fra"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn merge_is_incremental_training() {
        let e = encoder();
        let (mut a, _) = train_language("x", &["one two", "three"], &e).unwrap();
        let (b, _) = train_language("x", &["four five six"], &e).unwrap();
        let (all, _) = train_language("x", &["one two", "three", "four five six"], &e).unwrap();
        a.merge(&b);
        assert_eq!(a, all);
    }
}
