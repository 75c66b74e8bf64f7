//! Dense hypervectors and the multiply-add-permute algebra.
//!
//! Three kinds of vectors appear throughout the crate:
//!
//! - [`BipolarLabel`]: a balanced random ±1 vector assigned to one symbol.
//! - [`Hypervector`]: an integer accumulator. n-gram vectors, text vectors
//!   and language vectors are all hypervectors.
//! - [`Permutation`]: a fixed random coordinate shuffle with its powers
//!   precomputed, used to encode position within a block.
//!
//! Binding is elementwise multiplication, bundling is elementwise addition,
//! and similarity is the cosine of the angle between two vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Deterministic random source for labels and permutations.
///
/// Backed by ChaCha8 seeded through `SeedableRng::seed_from_u64`, which is
/// specified bit-for-bit and does not depend on the platform. Index draws
/// always go through `u32`, so 32- and 64-bit targets agree.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.inner.gen_range(0..=i as u32) as usize;
            items.swap(i, j);
        }
    }

    pub fn next_index(&mut self, bound: usize) -> usize {
        self.inner.gen_range(0..bound as u32) as usize
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 || !dim.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "dimensionality must be even and at least 2, got {dim}"
        )));
    }
    if dim > u32::MAX as usize {
        return Err(Error::Config(format!("dimensionality {dim} is too large")));
    }
    Ok(())
}

/// Integer-valued hypervector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    components: Vec<i32>,
}

impl Hypervector {
    pub fn zeros(dim: usize) -> Self {
        Hypervector {
            components: vec![0; dim],
        }
    }

    /// The multiplicative identity.
    pub fn ones(dim: usize) -> Self {
        Hypervector {
            components: vec![1; dim],
        }
    }

    pub fn from_components(components: Vec<i32>) -> Result<Self> {
        check_dim(components.len())?;
        Ok(Hypervector { components })
    }

    pub(crate) fn from_components_unchecked(components: Vec<i32>) -> Self {
        Hypervector { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[i32] {
        &self.components
    }

    pub(crate) fn components_mut(&mut self) -> &mut [i32] {
        &mut self.components
    }

    pub fn into_components(self) -> Vec<i32> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0)
    }

    /// True if every component is -1 or +1.
    pub fn is_bipolar(&self) -> bool {
        self.components.iter().all(|&c| c == 1 || c == -1)
    }

    pub fn bind(&self, other: &Hypervector) -> Hypervector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in bind");
        Hypervector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| a * b)
                .collect(),
        }
    }

    pub fn bundle(&self, other: &Hypervector) -> Hypervector {
        let mut out = self.clone();
        out.accumulate(other);
        out
    }

    /// In-place bundle.
    pub fn accumulate(&mut self, other: &Hypervector) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in bundle");
        for (a, &b) in self.components.iter_mut().zip(&other.components) {
            *a += b;
        }
    }

    pub fn scale(&self, factor: i32) -> Hypervector {
        Hypervector {
            components: self.components.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn negate(&self) -> Hypervector {
        self.scale(-1)
    }

    pub fn permute(&self, perm: &Permutation, k: usize) -> Hypervector {
        Hypervector {
            components: perm.apply(&self.components, k),
        }
    }

    pub fn dot(&self, other: &Hypervector) -> i128 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot");
        dot_i32(&self.components, &other.components)
    }

    pub fn norm_squared(&self) -> i128 {
        dot_i32(&self.components, &self.components)
    }

    pub fn cosine(&self, other: &Hypervector) -> Result<f64> {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in cosine");
        cosine_from_parts(self.dot(other), self.norm_squared(), other.norm_squared())
    }
}

fn dot_i32(a: &[i32], b: &[i32]) -> i128 {
    // Chunked i64 partial sums; each chunk stays far below i64 overflow for
    // any realistic component magnitude.
    a.chunks(1024)
        .zip(b.chunks(1024))
        .map(|(x, y)| {
            x.iter()
                .zip(y)
                .map(|(&p, &q)| p as i64 * q as i64)
                .sum::<i64>() as i128
        })
        .sum()
}

/// Cosine from an exact dot product and squared norms.
///
/// Parallel and anti-parallel vectors return exactly ±1.0.
pub(crate) fn cosine_from_parts(dot: i128, norm_a: i128, norm_b: i128) -> Result<f64> {
    if norm_a == 0 || norm_b == 0 {
        return Err(Error::DegenerateVector);
    }
    if let (Some(lhs), Some(rhs)) = (dot.checked_mul(dot), norm_a.checked_mul(norm_b)) {
        if lhs == rhs {
            return Ok(if dot > 0 { 1.0 } else { -1.0 });
        }
    }
    let cos = dot as f64 / ((norm_a as f64).sqrt() * (norm_b as f64).sqrt());
    Ok(cos.clamp(-1.0, 1.0))
}

/// A balanced ±1 vector: exactly half the components are +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipolarLabel {
    components: Vec<i8>,
}

impl BipolarLabel {
    pub fn random(dim: usize, rng: &mut SeededRng) -> Result<Self> {
        check_dim(dim)?;
        let mut components = vec![1i8; dim];
        components[dim / 2..].fill(-1);
        rng.shuffle(&mut components);
        Ok(BipolarLabel { components })
    }

    pub fn from_components(components: Vec<i8>) -> Result<Self> {
        check_dim(components.len())?;
        let mut plus = 0usize;
        for &c in &components {
            match c {
                1 => plus += 1,
                -1 => {}
                other => {
                    return Err(Error::invariant(
                        "label bipolarity",
                        format!("component {other} is not ±1"),
                    ))
                }
            }
        }
        if plus * 2 != components.len() {
            return Err(Error::invariant(
                "label balance",
                format!("{plus} of {} components are +1", components.len()),
            ));
        }
        Ok(BipolarLabel { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[i8] {
        &self.components
    }

    pub fn to_hypervector(&self) -> Hypervector {
        Hypervector {
            components: self.components.iter().map(|&c| c as i32).collect(),
        }
    }
}

impl From<&BipolarLabel> for Hypervector {
    fn from(label: &BipolarLabel) -> Self {
        label.to_hypervector()
    }
}

/// A random coordinate permutation with powers `0..=n_max` precomputed.
///
/// Placement convention: applying the permutation once moves the component
/// at index `i` to index `mapping[i]`, i.e. `out[mapping[i]] = in[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<u32>,
    /// `gather[k][j]` is the source index of output `j` under the k-th power.
    gather: Vec<Vec<u32>>,
}

impl Permutation {
    pub fn random(dim: usize, n_max: usize, rng: &mut SeededRng) -> Result<Self> {
        check_dim(dim)?;
        let mut mapping: Vec<u32> = (0..dim as u32).collect();
        rng.shuffle(&mut mapping);
        Self::from_mapping(mapping, n_max)
    }

    /// Validates that `mapping` is a bijection and precomputes its powers.
    pub fn from_mapping(mapping: Vec<u32>, n_max: usize) -> Result<Self> {
        let dim = mapping.len();
        let mut seen = vec![false; dim];
        for &m in &mapping {
            let m = m as usize;
            if m >= dim || seen[m] {
                return Err(Error::invariant(
                    "permutation bijection",
                    format!("index {m} is out of range or repeated"),
                ));
            }
            seen[m] = true;
        }

        let mut inverse = vec![0u32; dim];
        for (i, &m) in mapping.iter().enumerate() {
            inverse[m as usize] = i as u32;
        }
        let mut gather = Vec::with_capacity(n_max + 1);
        gather.push((0..dim as u32).collect::<Vec<_>>());
        for k in 1..=n_max {
            // src_k[j] = src_{k-1}[inverse[j]]
            let prev: &Vec<u32> = &gather[k - 1];
            let next = inverse.iter().map(|&s| prev[s as usize]).collect();
            gather.push(next);
        }
        Ok(Permutation { mapping, gather })
    }

    pub fn dim(&self) -> usize {
        self.mapping.len()
    }

    pub fn n_max(&self) -> usize {
        self.gather.len() - 1
    }

    pub fn mapping(&self) -> &[u32] {
        &self.mapping
    }

    /// Destination index of each source coordinate under the k-th power.
    pub fn power(&self, k: usize) -> Vec<u32> {
        let src = self.gather_table(k);
        let mut dest = vec![0u32; src.len()];
        for (j, &s) in src.iter().enumerate() {
            dest[s as usize] = j as u32;
        }
        dest
    }

    pub(crate) fn gather_table(&self, k: usize) -> &[u32] {
        assert!(
            k <= self.n_max(),
            "permutation power {k} exceeds precomputed maximum {}",
            self.n_max()
        );
        &self.gather[k]
    }

    /// Applies the k-th power of the permutation to `input`.
    pub fn apply<T: Copy>(&self, input: &[T], k: usize) -> Vec<T> {
        assert_eq!(input.len(), self.dim(), "dimension mismatch in permute");
        self.gather_table(k)
            .iter()
            .map(|&s| input[s as usize])
            .collect()
    }
}

pub fn bind(a: &Hypervector, b: &Hypervector) -> Hypervector {
    a.bind(b)
}

pub fn bundle(a: &Hypervector, b: &Hypervector) -> Hypervector {
    a.bundle(b)
}

pub fn permute(v: &Hypervector, p: &Permutation, k: usize) -> Hypervector {
    v.permute(p, k)
}

pub fn cosine(x: &Hypervector, v: &Hypervector) -> Result<f64> {
    x.cosine(v)
}
