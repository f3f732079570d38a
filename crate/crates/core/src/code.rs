//! Binary linear codes and the EBCH / Hamming constructions used as
//! construction A component codes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::binmat::{BitMatrix, BitVector};
use crate::error::{invalid, Error, Result};
use crate::gf::{self, Gf2Poly};

/// Largest dimension for which [`BinaryCode::brute_force_weight_profile`]
/// enumerates every codeword.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Ebch,
    Polar,
    ExtHamming,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Ebch => "ebch",
            Family::Polar => "polar",
            Family::ExtHamming => "exthamming",
            Family::Custom => "custom",
        }
    }

    /// Conventional display name of an `(n, k)` member of the family.
    pub fn code_name(self, n: usize, k: usize) -> String {
        let tag = match self {
            Family::Ebch => "EBCH",
            Family::Polar => "Polar",
            Family::ExtHamming => "ExtHamming",
            Family::Custom => "Custom",
        };
        format!("{tag}({n},{k})")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let family = if s.eq_ignore_ascii_case("ebch") {
            Family::Ebch
        } else if s.eq_ignore_ascii_case("polar") {
            Family::Polar
        } else if s.eq_ignore_ascii_case("exthamming") || s.eq_ignore_ascii_case("ext-hamming") {
            Family::ExtHamming
        } else if s.eq_ignore_ascii_case("custom") {
            Family::Custom
        } else {
            return Err(invalid(format!("unknown code family `{s}`")));
        };
        Ok(family)
    }
}

/// The parameters the design search needs: `(n, k, d_c, tau_c)` plus a label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub name: String,
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub d_c: u32,
    pub tau_c: u64,
}

impl CodeParams {
    pub fn new(family: Family, n: usize, k: usize, d_c: u32, tau_c: u64) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(invalid(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        if d_c == 0 || d_c as usize > n || tau_c == 0 {
            return Err(invalid(format!("need 1 <= d_c <= n and tau_c >= 1, got d_c={d_c} tau_c={tau_c}")));
        }
        Ok(CodeParams { name: family.code_name(n, k), family, n, k, d_c, tau_c })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// An `(n, k)` binary linear code given by a full-rank `k x n` generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    name: String,
    family: Family,
    gen: BitMatrix,
    d_c: Option<u32>,
    tau_c: Option<u64>,
}

impl BinaryCode {
    pub fn new(name: impl Into<String>, family: Family, gen: BitMatrix) -> Result<Self> {
        let rank = gen.rank();
        if rank != gen.rows() {
            return Err(Error::RankDeficient { rank, rows: gen.rows() });
        }
        Ok(BinaryCode { name: name.into(), family, gen, d_c: None, tau_c: None })
    }

    /// Records the minimum distance and its multiplicity.
    pub fn with_profile(mut self, d_c: u32, tau_c: u64) -> Self {
        self.d_c = Some(d_c);
        self.tau_c = Some(tau_c);
        self
    }

    pub fn with_min_distance(mut self, d_c: u32) -> Self {
        self.d_c = Some(d_c);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.gen
    }

    pub fn d_c(&self) -> Option<u32> {
        self.d_c
    }

    pub fn tau_c(&self) -> Option<u64> {
        self.tau_c
    }

    /// Design parameters, available once `d_c` and `tau_c` are known.
    pub fn params(&self) -> Option<CodeParams> {
        Some(CodeParams {
            name: self.name.clone(),
            family: self.family,
            n: self.n(),
            k: self.k(),
            d_c: self.d_c?,
            tau_c: self.tau_c?,
        })
    }

    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        self.gen.encode(u)
    }

    pub fn systematic(&self) -> (BitMatrix, Vec<usize>) {
        self.gen.systematize().expect("generator has full rank")
    }

    /// A `(n-k) x n` parity-check matrix, or `None` for a rate-1 code.
    pub fn parity_check(&self) -> Option<BitMatrix> {
        let (n, k) = (self.n(), self.k());
        if k == n {
            return None;
        }
        // With G' = [I | P] in permuted coordinates, H' = [P^T | I].
        let (sys, perm) = self.systematic();
        let mut h = BitMatrix::zeros(n - k, n);
        for r in 0..n - k {
            for (i, &col) in perm[..k].iter().enumerate() {
                if sys.get(i, k + r) {
                    h.set(r, col, true);
                }
            }
            h.set(r, perm[k + r], true);
        }
        Some(h)
    }

    /// Membership test via the syndrome.
    pub fn contains(&self, word: &BitVector) -> bool {
        if word.len() != self.n() {
            return false;
        }
        match self.parity_check() {
            None => true,
            Some(h) => (0..h.rows()).all(|r| {
                h.row_words(r).iter().zip(word.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 0
            }),
        }
    }

    /// Appends an overall parity bit, making every codeword even-weight.
    pub fn extend_even_parity(&self) -> BinaryCode {
        let gen = append_parity(&self.gen);
        let (d_c, tau_c) = match self.d_c {
            Some(d) if d % 2 == 0 => (Some(d), self.tau_c),
            Some(d) => (Some(d + 1), None),
            None => (None, None),
        };
        BinaryCode { name: self.name.clone(), family: self.family, gen, d_c, tau_c }
    }

    /// Minimum nonzero weight and its multiplicity, by enumerating all `2^k`
    /// codewords in Gray-code order.
    pub fn brute_force_weight_profile(&self) -> Result<(u32, u64)> {
        let k = self.k();
        if k > ENUMERATION_LIMIT {
            return Err(Error::TooLarge { k, limit: ENUMERATION_LIMIT });
        }
        let stride = self.gen.row_words(0).len();
        let mut word = alloc::vec![0u64; stride];
        let (mut best, mut count) = (u32::MAX, 0u64);
        for step in 1u64..(1u64 << k) {
            let flip = step.trailing_zeros() as usize;
            for (w, r) in word.iter_mut().zip(self.gen.row_words(flip)) {
                *w ^= r;
            }
            let wt: u32 = word.iter().map(|w| w.count_ones()).sum();
            match wt.cmp(&best) {
                core::cmp::Ordering::Less => {
                    best = wt;
                    count = 1;
                }
                core::cmp::Ordering::Equal => count += 1,
                core::cmp::Ordering::Greater => {}
            }
        }
        Ok((best, count))
    }

    /// Narrow-sense primitive BCH code of length `2^m - 1`, generated by the
    /// cyclic shifts of its generator polynomial.
    pub fn bch(m: u32, delta: u32) -> Result<BinaryCode> {
        let g = gf::bch_generator(m, delta)?;
        let n = (1usize << m) - 1;
        let code = cyclic_code(&g, n);
        let k = code.rows();
        BinaryCode::new(format!("BCH({n},{k})"), Family::Custom, code)
    }

    /// Extended BCH code of length `2^m` with designed distance `delta`.
    pub fn ebch(m: u32, delta: u32) -> Result<BinaryCode> {
        let bch = BinaryCode::bch(m, delta)?;
        let ext = bch.extend_even_parity();
        let (n, k) = (ext.n(), ext.k());
        Ok(BinaryCode { name: Family::Ebch.code_name(n, k), family: Family::Ebch, ..ext })
    }

    /// The EBCH code of length `n` and dimension `k`, using the smallest
    /// designed distance that yields that dimension.
    pub fn ebch_with_dimension(n: usize, k: usize) -> Result<BinaryCode> {
        let m = log2_exact(n).ok_or_else(|| invalid(format!("EBCH length {n} is not a power of two")))?;
        for delta in (3..=31).step_by(2) {
            match gf::bch_generator(m, delta) {
                Ok(g) if n - 1 - g.degree().unwrap() == k => return BinaryCode::ebch(m, delta),
                Ok(_) | Err(Error::UnsupportedDistance(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Err(Error::Infeasible(format!("no narrow-sense EBCH code with n={n}, k={k}")))
    }

    /// Extended Hamming code `(2^m, 2^m - m - 1, 4)`.
    pub fn extended_hamming(m: u32) -> Result<BinaryCode> {
        let mut code = BinaryCode::ebch(m, 3)?;
        code.family = Family::ExtHamming;
        code.name = Family::ExtHamming.code_name(code.n(), code.k());
        Ok(code)
    }

    pub fn repetition(n: usize) -> BinaryCode {
        let gen = BitMatrix::from_fn(1, n, |_, _| true);
        BinaryCode::new(format!("Rep({n})"), Family::Custom, gen).expect("nonzero row")
    }

    pub fn identity(n: usize) -> BinaryCode {
        BinaryCode::new(format!("Id({n})"), Family::Custom, BitMatrix::identity(n)).expect("identity")
    }
}

/// Appends a column holding the parity of each row.
pub fn append_parity(gen: &BitMatrix) -> BitMatrix {
    let cols = gen.cols();
    BitMatrix::from_fn(gen.rows(), cols + 1, |r, c| if c < cols { gen.get(r, c) } else { gen.row_weight(r) % 2 == 1 })
}

fn cyclic_code(g: &Gf2Poly, n: usize) -> BitMatrix {
    let deg = g.degree().expect("nonzero generator");
    let k = n - deg;
    BitMatrix::from_fn(k, n, |r, c| c >= r && c - r <= deg && g.coeff(c - r))
}

pub(crate) fn log2_exact(n: usize) -> Option<u32> {
    (n >= 2 && n.is_power_of_two()).then(|| n.trailing_zeros())
}
