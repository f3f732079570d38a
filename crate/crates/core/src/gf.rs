//! GF(2^m) arithmetic, GF(2) polynomials and narrow-sense BCH generators.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default primitive polynomials, indexed by extension degree. Bit `i` is the
/// coefficient of `x^i`. Degree 7 uses `x^7 + x^3 + 1`.
const PRIMITIVE_POLYS: [(u32, u32); 9] = [
    (2, 0b111),
    (3, 0b1011),
    (4, 0b1_0011),
    (5, 0b10_0101),
    (6, 0b100_0011),
    (7, 0b1000_1001),
    (8, 0b1_0001_1101),
    (9, 0b10_0001_0001),
    (10, 0b100_0000_1001),
];

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 10;

pub fn primitive_polynomial(m: u32) -> Result<u32> {
    PRIMITIVE_POLYS.iter().find(|(d, _)| *d == m).map(|&(_, p)| p).ok_or(Error::UnsupportedField(m))
}

/// An element of GF(2^m) as the bit pattern of its polynomial coefficients.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfElement(pub u16);

impl GfElement {
    pub const ZERO: GfElement = GfElement(0);
    pub const ONE: GfElement = GfElement(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl core::ops::Add for GfElement {
    type Output = GfElement;

    // Characteristic 2: addition is XOR.
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: GfElement) -> GfElement {
        GfElement(self.0 ^ rhs.0)
    }
}

/// Shift-and-add multiplication in GF(2^m) with the default primitive
/// polynomial. Inputs must already be reduced.
pub fn gf_mul(a: GfElement, b: GfElement, m: u32) -> Result<GfElement> {
    let poly = primitive_polynomial(m)?;
    let top = 1u32 << m;
    debug_assert!((a.0 as u32) < top && (b.0 as u32) < top);
    let (mut x, mut y, mut acc) = (a.0 as u32, b.0 as u32, 0u32);
    while y != 0 {
        if y & 1 == 1 {
            acc ^= x;
        }
        y >>= 1;
        x <<= 1;
        if x & top != 0 {
            x ^= poly;
        }
    }
    Ok(GfElement(acc as u16))
}

/// Table-driven GF(2^m).
#[derive(Clone, Debug)]
pub struct Gf2m {
    m: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Gf2m {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_polynomial(m, primitive_polynomial(m)?)
    }

    /// Builds the field from `poly`, which must be primitive of degree `m`.
    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) || poly >> m != 1 {
            return Err(Error::UnsupportedField(m));
        }
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x = 1u32;
        for (i, slot) in exp[..order].iter_mut().enumerate() {
            if i > 0 && x == 1 {
                // alpha has order < 2^m - 1
                return Err(Error::UnsupportedField(m));
            }
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::UnsupportedField(m));
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Gf2m { m, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Size of the multiplicative group, `2^m - 1`.
    pub fn order(&self) -> usize {
        (1 << self.m) - 1
    }

    #[inline]
    pub fn alpha_pow(&self, e: usize) -> GfElement {
        GfElement(self.exp[e % self.order()])
    }

    #[inline]
    pub fn mul(&self, a: GfElement, b: GfElement) -> GfElement {
        if a.is_zero() || b.is_zero() {
            return GfElement::ZERO;
        }
        let e = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        GfElement(self.exp[e])
    }

    pub fn inv(&self, a: GfElement) -> Option<GfElement> {
        if a.is_zero() {
            return None;
        }
        let l = self.log[a.0 as usize] as usize;
        Some(GfElement(self.exp[(self.order() - l) % self.order()]))
    }
}

/// Polynomial over GF(2); bit `i` holds the coefficient of `x^i`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_exponents(&[0])
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    /// `x^n + 1`, i.e. `x^n - 1` over GF(2).
    pub fn x_pow_minus_one(n: usize) -> Self {
        Self::from_exponents(&[0, n])
    }

    fn toggle(&mut self, e: usize) {
        let w = e / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (e % 64);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Gf2Poly::zero();
        };
        let mut out = Gf2Poly { words: vec![0; (da + db) / 64 + 1] };
        for i in (0..=da).filter(|&i| self.coeff(i)) {
            for j in (0..=db).filter(|&j| other.coeff(j)) {
                out.words[(i + j) / 64] ^= 1 << ((i + j) % 64);
            }
        }
        out.trim();
        out
    }

    /// Remainder of division by `divisor`. Panics on a zero divisor.
    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            for j in (0..=dd).filter(|&j| divisor.coeff(j)) {
                r.words[(dr - dd + j) / 64] ^= 1 << ((dr - dd + j) % 64);
            }
            r.trim();
        }
        r
    }

    pub fn divides(&self, other: &Gf2Poly) -> bool {
        other.rem(self).is_zero()
    }
}

/// Cyclotomic cosets of 2 modulo `2^m - 1`, each sorted, ordered by smallest
/// element.
pub fn cyclotomic_cosets(m: u32) -> Vec<Vec<usize>> {
    let order = (1usize << m) - 1;
    let mut seen = vec![false; order];
    let mut cosets = Vec::new();
    for s in 0..order {
        if seen[s] {
            continue;
        }
        let mut coset = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            coset.push(x);
            x = (2 * x) % order;
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    cosets
}

/// Minimal polynomial over GF(2) of `alpha^s`.
pub fn minimal_polynomial(field: &Gf2m, s: usize) -> Gf2Poly {
    let order = field.order();
    // Conjugates alpha^(s 2^i).
    let mut roots = Vec::new();
    let mut e = s % order;
    loop {
        roots.push(field.alpha_pow(e));
        e = (2 * e) % order;
        if e == s % order {
            break;
        }
    }
    // Expand prod (x + r) with coefficients in GF(2^m); they land in GF(2).
    let mut coeffs = vec![GfElement::ONE];
    for r in roots {
        let mut next = vec![GfElement::ZERO; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1] + c;
            next[i] = next[i] + field.mul(c, r);
        }
        coeffs = next;
    }
    let exps: Vec<usize> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            debug_assert!(c.0 <= 1, "minimal polynomial coefficient outside GF(2)");
            (c.0 == 1).then_some(i)
        })
        .collect();
    Gf2Poly::from_exponents(&exps)
}

/// Generator polynomial of the narrow-sense primitive BCH code of length
/// `2^m - 1` with designed distance `delta`: the product of the distinct
/// minimal polynomials of `alpha^1 .. alpha^(delta-1)`.
pub fn bch_generator(m: u32, delta: u32) -> Result<Gf2Poly> {
    let field = Gf2m::new(m)?;
    let order = field.order();
    if delta.is_multiple_of(2) || !(3..=31).contains(&delta) || delta as usize > order {
        return Err(Error::UnsupportedDistance(delta));
    }
    let cosets = cyclotomic_cosets(m);
    let mut used = vec![false; cosets.len()];
    let mut g = Gf2Poly::one();
    for power in 1..delta as usize {
        let idx = cosets.iter().position(|c| c.binary_search(&power).is_ok()).unwrap();
        if !used[idx] {
            used[idx] = true;
            g = g.mul(&minimal_polynomial(&field, cosets[idx][0]));
        }
    }
    if g.degree().unwrap_or(0) >= order {
        return Err(Error::UnsupportedDistance(delta));
    }
    Ok(g)
}
