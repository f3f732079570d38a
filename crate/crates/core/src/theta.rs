//! Exact truncated theta series of `2Z^n` and of construction A lattices.
//!
//! All counts are arbitrary-precision integers. Floating point only appears
//! once the bound module turns them into probabilities.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::code::{BinaryCode, CodeParams};
use crate::error::{invalid, Result};

/// Leading terms `(d^2, count)` of a theta series, complete up to `dmax2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedTheta {
    terms: Vec<(u32, BigUint)>,
    dmax2: u32,
}

impl TruncatedTheta {
    /// Validates ordering, the leading `(0, 1)` term, positive counts and the
    /// truncation bound.
    pub fn new(terms: Vec<(u32, BigUint)>, dmax2: u32) -> Result<Self> {
        match terms.first() {
            Some((0, c)) if c.is_one() => {}
            _ => return Err(invalid("theta series must start with the term (0, 1)")),
        }
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("theta terms must be strictly increasing in d^2"));
        }
        if terms.iter().any(|(d2, c)| c.is_zero() || *d2 > dmax2) {
            return Err(invalid("theta terms need positive counts and d^2 <= dmax2"));
        }
        Ok(TruncatedTheta { terms, dmax2 })
    }

    pub fn terms(&self) -> &[(u32, BigUint)] {
        &self.terms
    }

    /// Terms with `d^2 > 0`.
    pub fn nonzero_terms(&self) -> &[(u32, BigUint)] {
        &self.terms[1..]
    }

    pub fn dmax2(&self) -> u32 {
        self.dmax2
    }

    pub fn count_at(&self, d2: u32) -> Option<&BigUint> {
        self.terms.iter().find(|(d, _)| *d == d2).map(|(_, c)| c)
    }

    /// Keeps terms with `d^2 <= dmax2`.
    pub fn truncate(&self, dmax2: u32) -> TruncatedTheta {
        let dmax2 = dmax2.min(self.dmax2);
        let terms = self.terms.iter().filter(|(d, _)| *d <= dmax2).cloned().collect();
        TruncatedTheta { terms, dmax2 }
    }

    /// Truncated theta of the construction A lattice of `code`.
    pub fn for_code(code: &CodeParams) -> Result<Self> {
        theta_construction_a(code.n, code.k, code.d_c, code.tau_c)
    }
}

/// Counts of `Z^n` vectors by squared norm `0..=max_norm`, by convolving the
/// one-dimensional series `1 + 2q + 2q^4 + 2q^9 + ...` `n` times.
fn sum_of_squares_counts(n: usize, max_norm: usize) -> Vec<BigUint> {
    let mut counts = vec![BigUint::zero(); max_norm + 1];
    counts[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); max_norm + 1];
        for (m, c) in counts.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            next[m] += c;
            let mut j = 1;
            while m + j * j <= max_norm {
                next[m + j * j] += c * 2u32;
                j += 1;
            }
        }
        counts = next;
    }
    counts
}

/// Theta series of `2Z^n` through `d^2 <= dmax2`. Every norm is a multiple of 4.
pub fn theta_2zn(n: usize, dmax2: u32) -> TruncatedTheta {
    let counts = sum_of_squares_counts(n, dmax2 as usize / 4);
    let terms = counts.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (4 * m as u32, c)).collect();
    TruncatedTheta { terms, dmax2 }
}

/// Truncated theta of `C + 2Z^n` through `d^2 = d_c`, for a code with minimum
/// distance `d_c` and `tau_c` minimum-weight codewords.
///
/// A codeword of weight `w` gives `2^w` lattice vectors of norm `w` (each one
/// may be `+1` or `-1`); the `2Z^n` part contributes its own terms at multiples
/// of 4 below `d_c`, and both merge when `d_c` is itself a multiple of 4.
pub fn theta_construction_a(n: usize, k: usize, d_c: u32, tau_c: u64) -> Result<TruncatedTheta> {
    if n == 0 || k == 0 || k > n || d_c == 0 || d_c as usize > n || tau_c == 0 {
        return Err(invalid(alloc::format!(
            "construction A theta needs 1 <= k <= n, 1 <= d_c <= n, tau_c >= 1 (n={n} k={k} d_c={d_c} tau_c={tau_c})"
        )));
    }
    let code_term = BigUint::from(tau_c) << d_c as usize;
    let mut terms = if d_c < 4 {
        vec![(0, BigUint::one())]
    } else if d_c.is_multiple_of(4) {
        theta_2zn(n, d_c - 4).terms
    } else {
        theta_2zn(n, d_c).terms
    };
    let lattice_term = if d_c.is_multiple_of(4) {
        let full = theta_2zn(n, d_c);
        full.count_at(d_c).cloned().unwrap_or_default()
    } else {
        BigUint::zero()
    };
    debug_assert!(terms.last().is_none_or(|(d, _)| *d < d_c));
    terms.push((d_c, code_term + lattice_term));
    Ok(TruncatedTheta { terms, dmax2: d_c })
}

/// The theta truncation depth used for a code: its minimum distance.
pub fn truncation_depth(code: &BinaryCode) -> Result<u32> {
    code.d_c().ok_or_else(|| invalid("minimum distance of the code is unknown"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn as_u64(theta: &TruncatedTheta) -> Vec<(u32, u64)> {
        theta.terms().iter().map(|(d, c)| (*d, u64::try_from(c).unwrap())).collect()
    }

    #[test]
    fn theta_2z4_through_12() {
        assert_eq!(as_u64(&theta_2zn(4, 12)), [(0, 1), (4, 8), (8, 24), (12, 32)]);
    }

    #[test]
    fn theta_2z_first_term() {
        assert_eq!(as_u64(&theta_2zn(1, 4)), [(0, 1), (4, 2)]);
        // 2 is not a square, so norm 8 is missing in one dimension.
        assert_eq!(as_u64(&theta_2zn(1, 16)), [(0, 1), (4, 2), (16, 2)]);
    }

    #[test]
    fn theta_2z128_through_8() {
        assert_eq!(as_u64(&theta_2zn(128, 8)), [(0, 1), (4, 256), (8, 32_512)]);
    }

    #[test]
    fn construction_a_dc4() {
        let t = theta_construction_a(128, 120, 4, 85_344).unwrap();
        assert_eq!(as_u64(&t), [(0, 1), (4, 1_365_760)]);
        let e8 = theta_construction_a(8, 4, 4, 14).unwrap();
        assert_eq!(as_u64(&e8), [(0, 1), (4, 240)]);
    }

    #[test]
    fn construction_a_dc6_and_dc8() {
        let t = theta_construction_a(128, 113, 6, 341_376).unwrap();
        assert_eq!(as_u64(&t), [(0, 1), (4, 256), (6, 21_848_064)]);
        let t = theta_construction_a(128, 106, 8, 774_192).unwrap();
        assert_eq!(as_u64(&t), [(0, 1), (4, 256), (8, 774_192 * 256 + 32_512)]);
        assert_eq!(t.dmax2(), 8);
    }

    #[test]
    fn construction_a_small_distance() {
        let t = theta_construction_a(16, 15, 2, 120).unwrap();
        assert_eq!(as_u64(&t), [(0, 1), (2, 480)]);
        let t = theta_construction_a(7, 7, 1, 7).unwrap();
        assert_eq!(as_u64(&t), [(0, 1), (1, 14)]);
    }

    #[test]
    fn construction_a_rejects_bad_params() {
        assert!(theta_construction_a(128, 106, 0, 5).is_err());
        assert!(theta_construction_a(128, 106, 8, 0).is_err());
        assert!(theta_construction_a(0, 0, 8, 1).is_err());
        assert!(theta_construction_a(8, 9, 4, 1).is_err());
    }

    #[test]
    fn huge_counts_stay_exact() {
        let t = theta_construction_a(128, 64, 32, u64::MAX).unwrap();
        let (d2, c) = t.terms().last().unwrap();
        assert_eq!(*d2, 32);
        assert!(c.bits() > 64 + 32);
    }

    #[test]
    fn validation_of_manual_series() {
        let one = BigUint::one();
        assert!(TruncatedTheta::new(vec![(0, one.clone()), (4, BigUint::from(3u8))], 4).is_ok());
        assert!(TruncatedTheta::new(vec![(4, one.clone())], 4).is_err());
        assert!(TruncatedTheta::new(vec![(0, one.clone()), (4, BigUint::zero())], 4).is_err());
        assert!(TruncatedTheta::new(vec![(0, one.clone()), (8, one.clone())], 4).is_err());
    }
}
