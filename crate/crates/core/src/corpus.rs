//! Labeled text corpora read from local files.
//!
//! Two layouts are accepted:
//!
//! - a directory of `<lang>.txt` files, one sample per line;
//! - a single tab-separated file of `lang<TAB>sentence` lines.
//!
//! Blank lines are ignored. TSV lines without a tab or with an empty label
//! are recorded as malformed and skipped. Bytes that are not valid UTF-8 are
//! replaced with U+FFFD.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub language: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub path: PathBuf,
    pub line: usize,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    pub samples: Vec<Sample>,
    /// Canonical path the corpus was read from, if any.
    pub source: Option<PathBuf>,
    pub malformed: Vec<MalformedLine>,
}

impl LabeledCorpus {
    pub fn from_samples(samples: Vec<Sample>) -> Self {
        LabeledCorpus {
            samples,
            ..Default::default()
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
        let mut corpus = if meta.is_dir() {
            Self::load_dir(path)?
        } else {
            Self::load_tsv(path)?
        };
        corpus.source = Some(fs::canonicalize(path).map_err(|e| Error::io(path, e))?);
        if corpus.samples.is_empty() {
            return Err(Error::EmptyCorpus(path.display().to_string()));
        }
        Ok(corpus)
    }

    fn load_dir(dir: &Path) -> Result<Self> {
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();

        let mut samples = Vec::new();
        for file in files {
            let language = file
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            for line in read_lines(&file)? {
                if !line.trim().is_empty() {
                    samples.push(Sample {
                        language: language.clone(),
                        text: line,
                    });
                }
            }
        }
        Ok(LabeledCorpus::from_samples(samples))
    }

    fn load_tsv(path: &Path) -> Result<Self> {
        let mut corpus = LabeledCorpus::default();
        for (i, line) in read_lines(path)?.into_iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let reason = match line.split_once('\t') {
                Some((lang, text)) if !lang.trim().is_empty() => {
                    corpus.samples.push(Sample {
                        language: lang.trim().to_string(),
                        text: text.to_string(),
                    });
                    continue;
                }
                Some(_) => "empty language label",
                None => "missing tab",
            };
            corpus.malformed.push(MalformedLine {
                path: path.to_path_buf(),
                line: i + 1,
                reason,
            });
        }
        Ok(corpus)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Language names in order of first appearance.
    pub fn languages(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for s in &self.samples {
            if !names.contains(&s.language) {
                names.push(s.language.clone());
            }
        }
        names
    }

    /// Samples grouped per language, in order of first appearance.
    pub fn by_language(&self) -> Vec<(String, Vec<String>)> {
        let mut groups: Vec<(String, Vec<String>)> = Vec::new();
        for s in &self.samples {
            match groups.iter_mut().find(|(name, _)| *name == s.language) {
                Some((_, texts)) => texts.push(s.text.clone()),
                None => groups.push((s.language.clone(), vec![s.text.clone()])),
            }
        }
        groups
    }

    /// Number of samples whose exact text also appears in `other`.
    pub fn shared_samples(&self, other: &LabeledCorpus) -> usize {
        let theirs: std::collections::HashSet<&str> =
            other.samples.iter().map(|s| s.text.as_str()).collect();
        self.samples
            .iter()
            .filter(|s| theirs.contains(s.text.as_str()))
            .count()
    }

    pub fn describe(&self) -> String {
        match &self.source {
            Some(p) => p.display().to_string(),
            None => "<in-memory>".to_string(),
        }
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(String::from_utf8_lossy(&bytes)
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directory_layout() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("en.txt"), "one\ntwo\n\nthree\n").unwrap();
        fs::write(dir.path().join("fr.txt"), "un\r\ndeux\r\n").unwrap();
        fs::write(dir.path().join("notes.md"), "ignored\n").unwrap();
        let c = LabeledCorpus::load(dir.path()).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.languages(), vec!["en", "fr"]);
        assert_eq!(c.samples[3].text, "un");
        let groups = c.by_language();
        assert_eq!(groups[0].1, vec!["one", "two", "three"]);
    }

    #[test]
    fn tsv_layout_skips_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("test.tsv");
        fs::write(
            &path,
            "en\thello there\nno tab here\n\t orphan\nfr\tbonjour\n",
        )
        .unwrap();
        let c = LabeledCorpus::load(&path).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.malformed.len(), 2);
        assert_eq!(c.malformed[0].line, 2);
        assert_eq!(c.malformed[0].reason, "missing tab");
        assert_eq!(c.malformed[1].reason, "empty language label");
    }

    #[test]
    fn empty_sources_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            LabeledCorpus::load(dir.path()),
            Err(Error::EmptyCorpus(_))
        ));
        let path = dir.path().join("bad.tsv");
        fs::write(&path, "no tab\n").unwrap();
        assert!(matches!(
            LabeledCorpus::load(&path),
            Err(Error::EmptyCorpus(_))
        ));
        assert!(matches!(
            LabeledCorpus::load(dir.path().join("missing")),
            Err(Error::Io { .. })
        ));
    }
}
