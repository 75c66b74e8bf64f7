//! Ranking languages, language-to-language similarity and next-symbol
//! queries.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::encoder::TextVector;
use crate::error::{Error, Result};
use crate::hv::cosine_from_parts;
use crate::model::LanguageModel;
use crate::normalize::Symbol;

/// Candidates with cosine scores, best first. Equal scores are ordered by
/// name.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    entries: Vec<(String, f64)>,
}

impl Ranking {
    pub fn new(mut entries: Vec<(String, f64)>) -> Self {
        entries.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        Ranking { entries }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn best(&self) -> (&str, f64) {
        let (name, score) = &self.entries[0];
        (name, *score)
    }

    pub fn top(&self, k: usize) -> &[(String, f64)] {
        &self.entries[..k.min(self.entries.len())]
    }

    pub fn score_of(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Symmetric matrix of pairwise language-vector cosines.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }

    /// Header row of names, then one row of cosines per language.
    pub fn to_csv(&self) -> String {
        let mut out = self.names.join(",");
        out.push('\n');
        for row in &self.values {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self) -> String {
        let width = self.names.iter().map(|n| n.len()).max().unwrap_or(0).max(6);
        let mut out = format!("{:width$}", "");
        for name in &self.names {
            let _ = write!(out, " {name:>width$}");
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.values) {
            let _ = write!(out, "{name:width$}");
            for v in row {
                let _ = write!(out, " {v:>width$.3}");
            }
            out.push('\n');
        }
        out
    }
}

impl LanguageModel {
    /// Scores an encoded text against every language.
    pub fn rank_vector(&self, text: &TextVector) -> Result<Ranking> {
        let norm = text.vector.norm_squared();
        let entries = self
            .languages()
            .iter()
            .map(|lang| {
                let dot = lang.vector.dot(&text.vector);
                let score = cosine_from_parts(dot, lang.vector.norm_squared(), norm)?;
                Ok((lang.name.clone(), score))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ranking::new(entries))
    }

    /// Full ranking of languages for `raw`; the first entry is the guess.
    pub fn classify(&self, raw: &str) -> Result<Ranking> {
        let seq = self.encoder().normalize(raw);
        if seq.is_empty() {
            return Err(Error::TextTooShort {
                symbols: 0,
                n: self.config().n,
            });
        }
        let tv = self.encoder().encode_text_stream(&seq)?;
        self.rank_vector(&tv)
    }

    pub fn similarity_matrix(&self) -> Result<SimilarityMatrix> {
        let langs = self.languages();
        let norms: Vec<i128> = langs.iter().map(|l| l.vector.norm_squared()).collect();
        let k = langs.len();
        let mut values = vec![vec![0.0; k]; k];
        for i in 0..k {
            values[i][i] = 1.0;
            for j in i + 1..k {
                let dot = langs[i].vector.dot(&langs[j].vector);
                let c = cosine_from_parts(dot, norms[i], norms[j])?;
                values[i][j] = c;
                values[j][i] = c;
            }
        }
        Ok(SimilarityMatrix {
            names: langs.iter().map(|l| l.name.clone()).collect(),
            values,
        })
    }

    /// Ranks every alphabet symbol `x` by how strongly the block
    /// `context + x` is present in the language vector.
    ///
    /// `context` must be exactly `n - 1` symbols; Space is written as `' '`.
    pub fn query_next_symbol(&self, language: &str, context: &str) -> Result<Ranking> {
        let lang = self.language(language)?;
        let encoder = self.encoder();
        let alphabet = encoder.alphabet();
        let mut block = alphabet.symbols_of(context)?;
        let n = encoder.n();
        if block.len() + 1 != n {
            return Err(Error::BlockLength {
                expected: n - 1,
                actual: block.len(),
            });
        }
        block.push(0);
        let lang_norm = lang.vector.norm_squared();
        let entries = (0..alphabet.len() as Symbol)
            .map(|x| {
                block[n - 1] = x;
                let probe = encoder.encode_ngram(&block)?;
                let score =
                    cosine_from_parts(lang.vector.dot(&probe), lang_norm, probe.norm_squared())?;
                Ok((alphabet.char_of(x).to_string(), score))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ranking::new(entries))
    }
}
