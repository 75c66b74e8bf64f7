//! n-gram and text encoding.
//!
//! A block of `n` symbols `s1 .. sn` is encoded as
//! `ρ^(n-1) L(s1) * ρ^(n-2) L(s2) * ... * ρ L(s(n-1)) * L(sn)`, where `L` is
//! the symbol's label, `*` is binding and `ρ^k` the k-th permutation power.
//! A text is padded with one Space on each side and its text vector is the
//! sum over every window of `n` consecutive symbols, so a text of `m`
//! symbols yields `m - n + 3` blocks.
//!
//! Two encoders produce identical results. [`Encoder::encode_text_naive`]
//! rebuilds every block from scratch in `O(n·D)`. The rolling encoder
//! ([`Encoder::encode_text_stream`], [`RollingEncoder`]) derives each block
//! from the previous one in `O(D)`:
//!
//! ```text
//! next = ρ(ρ^(n-1) L(outgoing) * current) * L(incoming)
//!      = ρ(current) * ρ^n L(outgoing) * L(incoming)
//! ```
//!
//! The second form (permutation distributes over binding) lets the update run
//! as a single pass over the coordinates with pre-permuted labels.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::hv::{check_dim, BipolarLabel, Hypervector, Permutation, SeededRng};
use crate::kernels;
use crate::normalize::{normalize, AlphabetConfig, Symbol, SymbolSequence};

pub const DEFAULT_N: usize = 4;
pub const DEFAULT_DIM: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;
/// Largest supported block size; the model file stores `n` as one byte.
pub const MAX_N: usize = u8::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderConfig {
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub alphabet: AlphabetConfig,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            n: DEFAULT_N,
            dim: DEFAULT_DIM,
            seed: DEFAULT_SEED,
            alphabet: AlphabetConfig::default(),
        }
    }
}

impl EncoderConfig {
    pub fn new(n: usize, dim: usize, seed: u64) -> Result<Self> {
        let cfg = EncoderConfig {
            n,
            dim,
            seed,
            alphabet: AlphabetConfig::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_alphabet(mut self, alphabet: AlphabetConfig) -> Self {
        self.alphabet = alphabet;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        if self.n == 0 || self.n > MAX_N {
            return Err(Error::Config(format!(
                "block size must be in 1..={MAX_N}, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// One balanced random label per alphabet symbol, in alphabet order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<BipolarLabel>,
}

impl LabelSet {
    pub fn random(alphabet: &AlphabetConfig, dim: usize, rng: &mut SeededRng) -> Result<Self> {
        let labels = (0..alphabet.len())
            .map(|_| BipolarLabel::random(dim, rng))
            .collect::<Result<_>>()?;
        Ok(LabelSet { labels })
    }

    pub fn from_labels(labels: Vec<BipolarLabel>) -> Self {
        LabelSet { labels }
    }

    pub fn get(&self, symbol: Symbol) -> &BipolarLabel {
        &self.labels[symbol as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BipolarLabel> {
        self.labels.iter()
    }
}

/// Sum of the n-gram vectors of every block of a padded text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextVector {
    pub vector: Hypervector,
    pub block_count: usize,
}

/// Labels, permutation and pre-permuted label tables for one configuration.
#[derive(Debug, Clone)]
pub struct Encoder {
    config: EncoderConfig,
    labels: LabelSet,
    permutation: Permutation,
    /// `shifted[k][s]` is `ρ^k L(s)` for `k` in `0..=n`.
    shifted: Vec<Vec<Vec<i8>>>,
}

impl PartialEq for Encoder {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.labels == other.labels
            && self.permutation.mapping() == other.permutation.mapping()
    }
}

impl Encoder {
    /// Draws the labels (in alphabet order) and then the permutation from
    /// `config.seed`.
    pub fn new(config: EncoderConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = SeededRng::new(config.seed);
        let labels = LabelSet::random(&config.alphabet, config.dim, &mut rng)?;
        let permutation = Permutation::random(config.dim, config.n, &mut rng)?;
        Ok(Self::assemble(config, labels, permutation))
    }

    /// Rebuilds an encoder from stored parts, checking that they agree with
    /// the configuration.
    pub fn from_parts(config: EncoderConfig, labels: LabelSet, mapping: Vec<u32>) -> Result<Self> {
        config.validate()?;
        if mapping.len() != config.dim {
            return Err(Error::invariant(
                "dimension agreement",
                format!(
                    "permutation has {} entries, expected {}",
                    mapping.len(),
                    config.dim
                ),
            ));
        }
        if labels.len() != config.alphabet.len() {
            return Err(Error::invariant(
                "label count",
                format!(
                    "{} labels for {} symbols",
                    labels.len(),
                    config.alphabet.len()
                ),
            ));
        }
        if let Some(bad) = labels.iter().find(|l| l.dim() != config.dim) {
            return Err(Error::invariant(
                "dimension agreement",
                format!(
                    "label has {} components, expected {}",
                    bad.dim(),
                    config.dim
                ),
            ));
        }
        let permutation = Permutation::from_mapping(mapping, config.n)?;
        Ok(Self::assemble(config, labels, permutation))
    }

    fn assemble(config: EncoderConfig, labels: LabelSet, permutation: Permutation) -> Self {
        let shifted = (0..=config.n)
            .map(|k| {
                labels
                    .iter()
                    .map(|l| permutation.apply(l.components(), k))
                    .collect()
            })
            .collect();
        Encoder {
            config,
            labels,
            permutation,
            shifted,
        }
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    pub fn alphabet(&self) -> &AlphabetConfig {
        &self.config.alphabet
    }

    fn shifted(&self, k: usize, s: Symbol) -> &[i8] {
        &self.shifted[k][s as usize]
    }

    pub fn normalize(&self, raw: &str) -> SymbolSequence {
        normalize(raw, &self.config.alphabet)
    }

    /// The text with one Space added at each end.
    pub fn padded(&self, text: &SymbolSequence) -> Vec<Symbol> {
        let space = self.config.alphabet.space();
        let mut padded = Vec::with_capacity(text.len() + 2);
        padded.push(space);
        padded.extend_from_slice(text.symbols());
        padded.push(space);
        padded
    }

    /// Number of blocks a text of `m` symbols produces.
    pub fn block_count(&self, m: usize) -> Result<usize> {
        if m + 2 < self.config.n {
            return Err(Error::TextTooShort {
                symbols: m,
                n: self.config.n,
            });
        }
        Ok(m + 3 - self.config.n)
    }

    fn check_block(&self, block: &[Symbol]) -> Result<()> {
        if block.len() != self.config.n {
            return Err(Error::BlockLength {
                expected: self.config.n,
                actual: block.len(),
            });
        }
        if let Some(&s) = block.iter().find(|&&s| s as usize >= self.labels.len()) {
            return Err(Error::Config(format!(
                "symbol index {s} outside the alphabet"
            )));
        }
        Ok(())
    }

    fn ngram_into(&self, block: &[Symbol], out: &mut [i8]) {
        let n = block.len();
        out.copy_from_slice(self.shifted(n - 1, block[0]));
        for (pos, &s) in block.iter().enumerate().skip(1) {
            kernels::bind_assign(out, self.shifted(n - 1 - pos, s));
        }
    }

    /// The bipolar vector of a single block of exactly `n` symbols.
    pub fn encode_ngram(&self, block: &[Symbol]) -> Result<Hypervector> {
        self.check_block(block)?;
        let mut out = vec![0i8; self.config.dim];
        self.ngram_into(block, &mut out);
        Ok(Hypervector::from_components_unchecked(
            out.into_iter().map(i32::from).collect(),
        ))
    }

    /// Reference encoder: every block is built from scratch.
    pub fn encode_text_naive(&self, text: &SymbolSequence) -> Result<TextVector> {
        let block_count = self.block_count(text.len())?;
        let padded = self.padded(text);
        let mut acc = vec![0i32; self.config.dim];
        let mut block = vec![0i8; self.config.dim];
        for window in padded.windows(self.config.n) {
            self.ngram_into(window, &mut block);
            kernels::add_assign(&mut acc, &block);
        }
        Ok(TextVector {
            vector: Hypervector::from_components_unchecked(acc),
            block_count,
        })
    }

    /// Single-pass encoder; bit-identical to [`Encoder::encode_text_naive`].
    pub fn encode_text_stream(&self, text: &SymbolSequence) -> Result<TextVector> {
        let mut acc = Hypervector::zeros(self.config.dim);
        let block_count = self.accumulate_text(text, &mut acc)?;
        Ok(TextVector {
            vector: acc,
            block_count,
        })
    }

    /// Adds the text vector of `text` into `acc` and returns its block count.
    pub fn accumulate_text(&self, text: &SymbolSequence, acc: &mut Hypervector) -> Result<usize> {
        assert_eq!(
            acc.dim(),
            self.config.dim,
            "dimension mismatch in accumulate"
        );
        let block_count = self.block_count(text.len())?;
        let mut rolling = RollingEncoder::new(self, acc.components_mut());
        let space = self.config.alphabet.space();
        rolling.push(space);
        for &s in text.symbols() {
            rolling.push(s);
        }
        rolling.push(space);
        debug_assert_eq!(rolling.blocks(), block_count);
        Ok(block_count)
    }

    /// Normalizes `raw` and encodes it with the streaming encoder.
    pub fn encode_str(&self, raw: &str) -> Result<TextVector> {
        self.encode_text_stream(&self.normalize(raw))
    }
}

/// Rolling block state over a stream of symbols.
///
/// Symbols are pushed one at a time; once `n` symbols have been seen, every
/// push completes one block whose vector is added into the accumulator. No
/// padding is applied here.
pub struct RollingEncoder<'a> {
    encoder: &'a Encoder,
    acc: &'a mut [i32],
    /// Last `n` symbols, oldest at `head` once full.
    ring: Vec<Symbol>,
    head: usize,
    seen: usize,
    block: Vec<i8>,
    scratch: Vec<i8>,
}

impl<'a> RollingEncoder<'a> {
    pub fn new(encoder: &'a Encoder, acc: &'a mut [i32]) -> Self {
        assert_eq!(
            acc.len(),
            encoder.dim(),
            "dimension mismatch in accumulator"
        );
        let dim = encoder.dim();
        RollingEncoder {
            encoder,
            acc,
            ring: vec![0; encoder.n()],
            head: 0,
            seen: 0,
            block: vec![0; dim],
            scratch: vec![0; dim],
        }
    }

    /// Blocks completed so far.
    pub fn blocks(&self) -> usize {
        (self.seen + 1).saturating_sub(self.ring.len())
    }

    pub fn push(&mut self, symbol: Symbol) {
        assert!(
            (symbol as usize) < self.encoder.labels.len(),
            "symbol index {symbol} outside the alphabet"
        );
        let n = self.ring.len();

        if n == 1 {
            kernels::add_assign(self.acc, self.encoder.shifted(0, symbol));
            self.seen += 1;
            return;
        }

        if self.seen < n {
            self.ring[self.seen] = symbol;
            self.seen += 1;
            if self.seen == n {
                self.encoder.ngram_into(&self.ring, &mut self.block);
                kernels::add_assign(self.acc, &self.block);
            }
            return;
        }

        let outgoing = self.ring[self.head];
        self.ring[self.head] = symbol;
        self.head = (self.head + 1) % n;
        self.seen += 1;

        let gather = self.encoder.permutation.gather_table(1);
        let leaving = self.encoder.shifted(n, outgoing);
        let entering = self.encoder.shifted(0, symbol);
        kernels::roll(
            &self.block,
            gather,
            leaving,
            entering,
            &mut self.scratch,
            self.acc,
        );
        std::mem::swap(&mut self.block, &mut self.scratch);
    }
}

/// Measured streaming-encoder throughput.
#[derive(Debug, Clone, Copy)]
pub struct Throughput {
    pub chars: usize,
    pub elapsed: Duration,
}

impl Throughput {
    pub fn chars_per_second(&self) -> f64 {
        self.chars as f64 / self.elapsed.as_secs_f64()
    }
}

/// Random normalized text of exactly `length` symbols: letters drawn
/// uniformly, with a single Space after roughly one in six letters.
pub fn synthetic_text(length: usize, alphabet: &AlphabetConfig, seed: u64) -> SymbolSequence {
    let mut rng = SeededRng::new(seed);
    let space = alphabet.space();
    let letters: Vec<Symbol> = (0..alphabet.len() as Symbol)
        .filter(|&s| s != space)
        .collect();
    let mut out = Vec::with_capacity(length);
    while out.len() < length {
        let gap = out.last().is_some_and(|&p| p != space) && out.len() + 1 < length;
        if gap && rng.next_index(6) == 0 {
            out.push(space);
        } else {
            out.push(letters[rng.next_index(letters.len())]);
        }
    }
    SymbolSequence::from_raw(out)
}

/// Times the streaming encoder over `length` synthetic symbols.
pub fn throughput_probe(length: usize, cfg: &EncoderConfig) -> Result<Throughput> {
    let encoder = Encoder::new(cfg.clone())?;
    let text = synthetic_text(length, &cfg.alphabet, cfg.seed ^ 0x5eed);
    Ok(time_stream(&encoder, &text))
}

pub fn time_stream(encoder: &Encoder, text: &SymbolSequence) -> Throughput {
    let start = Instant::now();
    let tv = encoder
        .encode_text_stream(text)
        .expect("synthetic text is long enough");
    let elapsed = start.elapsed();
    std::hint::black_box(tv);
    Throughput {
        chars: text.len(),
        elapsed,
    }
}
