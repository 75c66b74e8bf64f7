//! Text normalization onto a fixed symbol inventory.
//!
//! The pipeline, in order:
//!
//! 1. lowercase (Unicode `to_lowercase`) when `fold_case` is set;
//! 2. canonical decomposition (NFD) with combining marks dropped when
//!    `fold_diacritics` is set, so `é` becomes `e`;
//! 3. characters in the alphabet map to their index, everything else
//!    (digits, punctuation, whitespace, letters outside the alphabet) maps
//!    to Space;
//! 4. runs of Space collapse to one;
//! 5. leading and trailing Space are trimmed.
//!
//! Letters that have no canonical decomposition (`ß`, `ø`, `æ`, ...) are not
//! folded and become Space under the default alphabet. Invalid UTF-8 given to
//! [`normalize_bytes`] is replaced by U+FFFD first, which then maps to Space.

use std::collections::HashMap;

use unicode_normalization::char::{decompose_canonical, is_combining_mark};

use crate::error::{Error, Result};

pub const SPACE: char = ' ';
pub const DEFAULT_SYMBOLS: &str = "abcdefghijklmnopqrstuvwxyz ";

/// Index of a symbol in an [`AlphabetConfig`].
pub type Symbol = u16;

#[derive(Debug, Clone)]
pub struct AlphabetConfig {
    symbols: Vec<char>,
    space: Symbol,
    lookup: HashMap<char, Symbol>,
    fold_diacritics: bool,
    fold_case: bool,
}

impl PartialEq for AlphabetConfig {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
            && self.fold_case == other.fold_case
            && self.fold_diacritics == other.fold_diacritics
    }
}

impl Eq for AlphabetConfig {}

impl Default for AlphabetConfig {
    fn default() -> Self {
        AlphabetConfig::new(DEFAULT_SYMBOLS.chars().collect(), true, true)
            .expect("default alphabet is valid")
    }
}

impl AlphabetConfig {
    /// Symbol order is significant: labels are drawn in this order.
    pub fn new(symbols: Vec<char>, fold_case: bool, fold_diacritics: bool) -> Result<Self> {
        if symbols.len() > Symbol::MAX as usize {
            return Err(Error::Config(format!(
                "alphabet has {} symbols, at most {} are supported",
                symbols.len(),
                Symbol::MAX
            )));
        }
        let mut lookup = HashMap::with_capacity(symbols.len());
        for (i, &c) in symbols.iter().enumerate() {
            if lookup.insert(c, i as Symbol).is_some() {
                return Err(Error::Config(format!("alphabet repeats symbol {c:?}")));
            }
        }
        let space = *lookup
            .get(&SPACE)
            .ok_or_else(|| Error::Config("alphabet must contain Space".into()))?;
        Ok(AlphabetConfig {
            symbols,
            space,
            lookup,
            fold_diacritics,
            fold_case,
        })
    }

    pub fn from_symbols(symbols: &str) -> Result<Self> {
        Self::new(symbols.chars().collect(), true, true)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn space(&self) -> Symbol {
        self.space
    }

    pub fn fold_case(&self) -> bool {
        self.fold_case
    }

    pub fn fold_diacritics(&self) -> bool {
        self.fold_diacritics
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.lookup.get(&c).copied()
    }

    pub fn char_of(&self, s: Symbol) -> char {
        self.symbols[s as usize]
    }

    /// Maps each character of `text` to a symbol without any folding or
    /// trimming. Used for query contexts, where Space is meaningful.
    pub fn symbols_of(&self, text: &str) -> Result<Vec<Symbol>> {
        text.chars()
            .map(|c| {
                let c = if self.fold_case { fold_char(c) } else { c };
                self.index_of(c).ok_or(Error::UnknownSymbol(c))
            })
            .collect()
    }
}

fn fold_char(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Normalized text: symbol indices with no leading, trailing or doubled
/// Space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolSequence {
    symbols: Vec<Symbol>,
}

impl SymbolSequence {
    /// Builds a sequence from indices that already satisfy the invariants.
    pub(crate) fn from_raw(symbols: Vec<Symbol>) -> Self {
        SymbolSequence { symbols }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn render(&self, cfg: &AlphabetConfig) -> String {
        self.symbols.iter().map(|&s| cfg.char_of(s)).collect()
    }
}

pub fn normalize(raw: &str, cfg: &AlphabetConfig) -> SymbolSequence {
    let space = cfg.space;
    let mut out: Vec<Symbol> = Vec::with_capacity(raw.len());
    let mut push = |c: char| {
        let s = cfg.index_of(c).unwrap_or(space);
        if s == space && out.last().is_none_or(|&prev| prev == space) {
            return;
        }
        out.push(s);
    };

    let mut emit = |c: char| {
        if cfg.fold_diacritics {
            decompose_canonical(c, |d| {
                if !is_combining_mark(d) {
                    push(d)
                }
            });
        } else {
            push(c);
        }
    };

    for c in raw.chars() {
        if cfg.fold_case {
            c.to_lowercase().for_each(&mut emit);
        } else {
            emit(c);
        }
    }

    if out.last() == Some(&space) {
        out.pop();
    }
    SymbolSequence { symbols: out }
}

pub fn normalize_bytes(raw: &[u8], cfg: &AlphabetConfig) -> SymbolSequence {
    normalize(&String::from_utf8_lossy(raw), cfg)
}
