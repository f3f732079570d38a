//! Order-`l` ordered-statistics decoding in the mod* domain.
//!
//! Inputs are soft values `y_j` in `[0, 1]`. The hard decision is
//! `b_j = [y_j > 0.5]` with reliability `|y_j - 0.5|`. Columns are sorted by
//! decreasing reliability, the most reliable independent basis is found by
//! elimination, and every test pattern of weight at most `l` on that basis is
//! re-encoded. The candidate closest to `y` in squared Euclidean distance wins.

use alloc::vec;
use alloc::vec::Vec;

use crate::binmat::{BitMatrix, BitVector};
use crate::code::BinaryCode;
use crate::error::{invalid, Error, Result};
use crate::polar::next_combination;

/// A word of mod*-domain observations, each in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftWord(Vec<f64>);

impl SoftWord {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid(alloc::format!("soft value {v} is outside [0, 1]")));
        }
        Ok(SoftWord(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
        SoftWord(values)
    }

    /// The hard-decision word read as soft values.
    pub fn from_bits(bits: &BitVector) -> Self {
        SoftWord(bits.iter().map(|b| if b { 1.0 } else { 0.0 }).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Squared Euclidean distance to a binary word.
    pub fn distance(&self, word: &BitVector) -> f64 {
        self.0
            .iter()
            .zip(word.iter())
            .map(|(&y, c)| {
                let d = if c { 1.0 - y } else { y };
                d * d
            })
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OsdConfig {
    pub order: usize,
    /// Stops reprocessing after this many test patterns beyond the order-0
    /// candidate.
    pub max_candidates: Option<u64>,
}

impl OsdConfig {
    pub fn new(order: usize) -> Self {
        OsdConfig { order, max_candidates: None }
    }
}

/// `sum_{i=1}^{l} C(k, i)`: test patterns reprocessed beyond the order-0
/// candidate. Saturates at `u128::MAX`.
pub fn candidate_count(k: usize, l: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 1..=l.min(k) {
        c = match c.checked_mul((k - i + 1) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
        total = total.saturating_add(c);
    }
    total
}

/// Lazily enumerates subsets of `0..k` of sizes `1..=max_weight`, by size then
/// lexicographically.
#[derive(Clone, Debug)]
pub struct Patterns {
    k: usize,
    max_weight: usize,
    current: Vec<usize>,
    started: bool,
}

impl Patterns {
    pub fn new(k: usize, max_weight: usize) -> Self {
        Patterns { k, max_weight: max_weight.min(k), current: Vec::new(), started: false }
    }

    /// Advances to the next pattern and returns it, or `None` when exhausted.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if !self.started || !next_combination(&mut self.current, self.k) {
            let w = if self.started { self.current.len() + 1 } else { 1 };
            self.started = true;
            if w > self.max_weight {
                self.current.clear();
                return None;
            }
            self.current = (0..w).collect();
        }
        Some(&self.current)
    }
}

/// Decoder for one code. Holds its own scratch space, so use one instance per
/// thread.
#[derive(Clone, Debug)]
pub struct OsdDecoder {
    gen: BitMatrix,
    cfg: OsdConfig,
    order: Vec<usize>,
    weights: Vec<f64>,
    acc: Vec<u64>,
    best_pattern: Vec<usize>,
}

impl OsdDecoder {
    pub fn new(code: &BinaryCode, cfg: OsdConfig) -> Result<Self> {
        if cfg.order > code.k() {
            return Err(invalid(alloc::format!("OSD order {} exceeds k = {}", cfg.order, code.k())));
        }
        let n = code.n();
        Ok(OsdDecoder {
            gen: code.generator().clone(),
            cfg,
            order: (0..n).collect(),
            weights: vec![0.0; n],
            acc: Vec::new(),
            best_pattern: Vec::new(),
        })
    }

    pub fn config(&self) -> OsdConfig {
        self.cfg
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn decode(&mut self, y: &SoftWord) -> Result<BitVector> {
        self.decode_with_distance(y).map(|(c, _)| c)
    }

    /// Returns the decoded codeword and its squared distance to `y`.
    pub fn decode_with_distance(&mut self, y: &SoftWord) -> Result<(BitVector, f64)> {
        let (n, k) = (self.n(), self.k());
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: y.len() });
        }
        let y = y.values();
        let rel = |j: usize| (y[j] - 0.5).abs();

        self.order.clear();
        self.order.extend(0..n);
        self.order.sort_by(|&a, &b| rel(b).total_cmp(&rel(a)).then(a.cmp(&b)));
        let (sys, perm) = self.gen.permute_columns(&self.order).systematize()?;
        // Column q of `sys` is original column pos(q).
        let pos = |q: usize| self.order[perm[q]];
        let hard = |q: usize| y[pos(q)] > 0.5;
        for q in 0..n {
            // Flipping position q away from the hard decision costs 2 * reliability.
            self.weights[q] = 2.0 * rel(pos(q));
        }

        // Row vectors rather than a matrix: the parity part is empty when k = n.
        let parity: Vec<BitVector> = (0..k).map(|i| BitVector::from_bits((k..n).map(|q| sys.get(i, q)))).collect();
        let hard_parity = BitVector::from_bits((k..n).map(hard));
        // Discrepancy between the order-0 re-encoding and the hard decision.
        let mut disc0 = hard_parity;
        for i in (0..k).filter(|&i| hard(i)) {
            disc0.xor_words(parity[i].words());
        }

        let weights = &self.weights;
        let parity_cost = |acc: &[u64], bound: f64| -> f64 {
            let mut cost = 0.0;
            for (w, &word) in acc.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    cost += weights[k + 64 * w + bits.trailing_zeros() as usize];
                    if cost >= bound {
                        return cost;
                    }
                    bits &= bits - 1;
                }
            }
            cost
        };

        let mut best_cost = parity_cost(disc0.words(), f64::INFINITY);
        self.best_pattern.clear();
        let mut patterns = Patterns::new(k, self.cfg.order);
        let mut tried = 0u64;
        while let Some(pattern) = patterns.advance() {
            if self.cfg.max_candidates.is_some_and(|cap| tried >= cap) {
                break;
            }
            tried += 1;
            let info_cost: f64 = pattern.iter().map(|&i| weights[i]).sum();
            if info_cost >= best_cost {
                continue;
            }
            self.acc.clear();
            self.acc.extend_from_slice(disc0.words());
            for &i in pattern {
                for (a, p) in self.acc.iter_mut().zip(parity[i].words()) {
                    *a ^= p;
                }
            }
            let cost = info_cost + parity_cost(&self.acc, best_cost - info_cost);
            if cost < best_cost {
                best_cost = cost;
                self.best_pattern.clear();
                self.best_pattern.extend_from_slice(pattern);
            }
        }

        let mut info = BitVector::from_bits((0..k).map(hard));
        for &i in &self.best_pattern {
            info.flip(i);
        }
        let mut sys_word = BitVector::zeros(n);
        for i in info.iter_ones() {
            sys_word.xor_words(sys.row_words(i));
        }
        let mut word = BitVector::zeros(n);
        for q in sys_word.iter_ones() {
            word.set(pos(q), true);
        }
        let base: f64 = y
            .iter()
            .map(|&v| {
                let d = if v > 0.5 { 1.0 - v } else { v };
                d * d
            })
            .sum();
        Ok((word, base + best_cost))
    }
}

/// Decodes `y` with a fresh decoder for `code`.
pub fn osd_decode(y: &SoftWord, code: &BinaryCode, cfg: OsdConfig) -> Result<BitVector> {
    OsdDecoder::new(code, cfg)?.decode(y)
}
