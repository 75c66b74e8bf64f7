//! Evaluation on labeled corpora: confusion matrices and accuracy sweeps
//! over block sizes.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::corpus::LabeledCorpus;
use crate::encoder::EncoderConfig;
use crate::error::{Error, Result};
use crate::model::LanguageModel;

/// Entry `(i, j)` counts samples of true language `i` predicted as `j`.
/// Samples too short to encode are counted per true language in `skipped`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub names: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub skipped: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(names: Vec<String>) -> Self {
        let k = names.len();
        ConfusionMatrix {
            names,
            counts: vec![vec![0; k]; k],
            skipped: vec![0; k],
        }
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn count(&self, truth: &str, predicted: &str) -> u64 {
        match (self.index(truth), self.index(predicted)) {
            (Some(i), Some(j)) => self.counts[i][j],
            _ => 0,
        }
    }

    pub fn correct(&self) -> u64 {
        (0..self.names.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn classified(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn total_skipped(&self) -> u64 {
        self.skipped.iter().sum()
    }

    /// Correct predictions over classified samples; skips are excluded.
    pub fn accuracy(&self) -> f64 {
        let total = self.classified();
        if total == 0 {
            return 0.0;
        }
        self.correct() as f64 / total as f64
    }

    /// Accuracy per true language; `None` for languages with no classified
    /// samples.
    pub fn per_language_accuracy(&self) -> Vec<(String, Option<f64>)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let row: u64 = self.counts[i].iter().sum();
                let acc = (row > 0).then(|| self.counts[i][i] as f64 / row as f64);
                (name.clone(), acc)
            })
            .collect()
    }

    /// The most frequent wrong prediction for samples of `truth`.
    pub fn top_confusion(&self, truth: &str) -> Option<(&str, u64)> {
        let i = self.index(truth)?;
        self.counts[i]
            .iter()
            .enumerate()
            .filter(|&(j, &c)| j != i && c > 0)
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(&a.0)))
            .map(|(j, &c)| (self.names[j].as_str(), c))
    }

    /// Header `truth,<names...>,skipped`, one row per true language.
    pub fn to_csv(&self) -> String {
        let mut out = format!("truth,{},skipped\n", self.names.join(","));
        for (i, name) in self.names.iter().enumerate() {
            let cells: Vec<String> = self.counts[i].iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{name},{},{}", cells.join(","), self.skipped[i]);
        }
        out
    }

    pub fn render(&self) -> String {
        let width = self
            .names
            .iter()
            .map(|n| n.len())
            .chain(self.counts.iter().flatten().map(|c| c.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(4);
        let mut out = format!("{:width$}", "");
        for name in &self.names {
            let _ = write!(out, " {name:>width$}");
        }
        let _ = writeln!(out, " {:>7}", "skipped");
        for (i, name) in self.names.iter().enumerate() {
            let _ = write!(out, "{name:width$}");
            for c in &self.counts[i] {
                let _ = write!(out, " {c:>width$}");
            }
            let _ = writeln!(out, " {:>7}", self.skipped[i]);
        }
        out
    }
}

/// Classifies every sample with the top-1 rule.
pub fn evaluate(model: &LanguageModel, corpus: &LabeledCorpus) -> Result<ConfusionMatrix> {
    let names: Vec<String> = model.language_names().map(str::to_string).collect();
    let missing: Vec<String> = corpus
        .languages()
        .into_iter()
        .filter(|l| !names.contains(l))
        .collect();
    if !missing.is_empty() {
        return Err(Error::LanguageMismatch(missing));
    }

    let predictions: Vec<Option<usize>> = corpus
        .samples
        .par_iter()
        .map(|sample| match model.classify(&sample.text) {
            Ok(ranking) => {
                let best = ranking.best().0;
                Ok(names.iter().position(|n| n == best))
            }
            Err(Error::TextTooShort { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut cm = ConfusionMatrix::new(names);
    for (sample, predicted) in corpus.samples.iter().zip(predictions) {
        let truth = cm.index(&sample.language).expect("checked above");
        match predicted {
            Some(j) => cm.counts[truth][j] += 1,
            None => cm.skipped[truth] += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub accuracy: f64,
    pub classified: u64,
    pub skipped: u64,
}

/// Trains a fresh model per block size (same seed and dimensionality as
/// `base`) and evaluates it on `test`.
///
/// The training and test corpora must come from different sources.
pub fn accuracy_sweep(
    train: &LabeledCorpus,
    test: &LabeledCorpus,
    ns: &[usize],
    base: &EncoderConfig,
) -> Result<Vec<SweepRow>> {
    if let (Some(a), Some(b)) = (&train.source, &test.source) {
        if a == b {
            return Err(Error::OverlappingCorpora(a.clone()));
        }
    }
    let configs = ns
        .iter()
        .map(|&n| {
            let cfg = EncoderConfig { n, ..base.clone() };
            cfg.validate().map(|_| cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    configs
        .into_par_iter()
        .map(|cfg| {
            let n = cfg.n;
            let model = LanguageModel::build(train.by_language(), cfg)?;
            let cm = evaluate(&model, test)?;
            Ok(SweepRow {
                n,
                accuracy: cm.accuracy(),
                classified: cm.classified(),
                skipped: cm.total_skipped(),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,accuracy,classified,skipped\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.n, r.accuracy, r.classified, r.skipped);
    }
    out
}

pub fn render_sweep(rows: &[SweepRow]) -> String {
    let mut out = String::from("  n  accuracy %  classified  skipped\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:>10.1}  {:>10}  {:>7}",
            r.n,
            r.accuracy * 100.0,
            r.classified,
            r.skipped
        );
    }
    out
}

/// Plain-text header describing an evaluation run.
pub fn report_header(model: &LanguageModel, test: &LabeledCorpus, cm: &ConfusionMatrix) -> String {
    let cfg = model.config();
    let mut out = String::new();
    let _ = writeln!(out, "model: D={} n={} seed={}", cfg.dim, cfg.n, cfg.seed);
    for lang in model.languages() {
        let _ = writeln!(
            out,
            "  trained {}: {} samples, {} bytes",
            lang.name, lang.sample_count, lang.byte_count
        );
    }
    let _ = writeln!(
        out,
        "test corpus: {} ({} samples)",
        test.describe(),
        test.len()
    );
    if !test.malformed.is_empty() {
        let _ = writeln!(out, "malformed lines skipped: {}", test.malformed.len());
    }
    let _ = writeln!(
        out,
        "classified: {}  skipped (too short): {}  accuracy: {:.2}%",
        cm.classified(),
        cm.total_skipped(),
        cm.accuracy() * 100.0
    );
    out
}
