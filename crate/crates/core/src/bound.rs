//! Truncated union bound on the word error rate of a construction A lattice,
//! its numerical inversion to a required VNR, and the design rules built on it.
//!
//! With `V = 2^(n-k)` the noise variance at a given VNR is
//! `sigma^2 = 4^(1-R) / (2 pi e VNR)` and the estimate is
//! `P_e ~ sum_i tau_i Q(sqrt(d_i^2 / (4 sigma^2)))` over the nonzero theta terms.
//! Sums are accumulated in the log domain so that estimates far below the
//! smallest `f64` still compare correctly.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{E, LN_2, PI, SQRT_2};
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::code::CodeParams;
use crate::error::{invalid, Error, Result};
use crate::theta::TruncatedTheta;

/// Default inversion bracket in dB.
pub const DEFAULT_BRACKET_DB: (f64, f64) = (-5.0, 25.0);
const MAX_BISECTIONS: usize = 200;
/// Convergence target: relative error of the estimate at the returned VNR.
pub const INVERSION_REL_TOL: f64 = 1e-6;

const TWO_PI_E: f64 = 2.0 * PI * E;
/// Above this argument `Q` is evaluated through its continued fraction.
const CF_THRESHOLD: f64 = 35.0;

/// A volume-to-noise ratio in decibels.
#[derive(Copy, Clone, Debug, PartialEq, PartialOrd)]
pub struct VnrDb(pub f64);

impl VnrDb {
    pub fn from_linear(linear: f64) -> Self {
        VnrDb(10.0 * libm::log10(linear))
    }

    pub fn linear(self) -> f64 {
        libm::pow(10.0, self.0 / 10.0)
    }

    pub fn db(self) -> f64 {
        self.0
    }
}

impl fmt::Display for VnrDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} dB", self.0)
    }
}

/// Gaussian tail probability `P(N(0,1) > x)`.
///
/// Underflows to zero past `x ~ 38.5`; use [`ln_q`] there.
pub fn q_function(x: f64) -> f64 {
    if x >= CF_THRESHOLD {
        return libm::exp(ln_q(x));
    }
    0.5 * libm::erfc(x / SQRT_2)
}

/// Natural log of [`q_function`], finite for every finite `x`.
pub fn ln_q(x: f64) -> f64 {
    if x < CF_THRESHOLD {
        return libm::log(0.5 * libm::erfc(x / SQRT_2));
    }
    // Q(x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom-up.
    let mut tail = x;
    for j in (1..=60).rev() {
        tail = x + j as f64 / tail;
    }
    -0.5 * x * x - 0.5 * libm::log(2.0 * PI) - libm::log(tail)
}

/// Natural log of a big integer, exact to `f64` rounding.
pub(crate) fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return libm::log(v.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    libm::log(top) + shift as f64 * LN_2
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + libm::log(values.iter().map(|v| libm::exp(v - max)).sum::<f64>())
}

/// Per-dimension noise variance at a given VNR for a code of rate `rate`.
pub fn sigma2_from_vnr(vnr: VnrDb, rate: f64) -> f64 {
    libm::pow(4.0, 1.0 - rate) / (TWO_PI_E * vnr.linear())
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate <= 1.0 {
        Ok(())
    } else {
        Err(invalid(alloc::format!("code rate must lie in (0, 1], got {rate}")))
    }
}

/// Log of the truncated union bound estimate.
pub fn ln_pe_estimate(theta: &TruncatedTheta, vnr: VnrDb, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    let terms = theta.nonzero_terms();
    if terms.is_empty() {
        return Err(Error::DegenerateTheta);
    }
    let sigma2 = sigma2_from_vnr(vnr, rate);
    Ok(log_sum_exp(terms.iter().map(|(d2, count)| ln_biguint(count) + ln_q(libm::sqrt(*d2 as f64 / (4.0 * sigma2))))))
}

/// Truncated union bound estimate of the word error rate.
///
/// This is an estimate, not a probability: it can exceed 1 at low VNR.
pub fn pe_estimate(theta: &TruncatedTheta, vnr: VnrDb, rate: f64) -> Result<f64> {
    Ok(libm::exp(ln_pe_estimate(theta, vnr, rate)?))
}

/// VNR at which the estimate equals `target_pe`, searched on the default bracket.
pub fn required_vnr(theta: &TruncatedTheta, rate: f64, target_pe: f64) -> Result<VnrDb> {
    required_vnr_in(theta, rate, target_pe, DEFAULT_BRACKET_DB)
}

/// Bisection in dB for the VNR where the estimate equals `target_pe`.
///
/// The estimate is strictly decreasing in VNR, so the root is unique when
/// the target lies between the estimates at the bracket ends.
pub fn required_vnr_in(theta: &TruncatedTheta, rate: f64, target_pe: f64, bracket: (f64, f64)) -> Result<VnrDb> {
    if !(target_pe > 0.0 && target_pe < 1.0) {
        return Err(invalid(alloc::format!("target error rate must lie in (0, 1), got {target_pe}")));
    }
    let (mut lo, mut hi) = bracket;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(invalid("bracket must satisfy lo < hi"));
    }
    let ln_target = libm::log(target_pe);
    let f = |db: f64| ln_pe_estimate(theta, VnrDb(db), rate).map(|v| v - ln_target);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(Error::BracketFailure {
            target: target_pe,
            low: libm::exp(f_hi + ln_target),
            high: libm::exp(f_lo + ln_target),
        });
    }
    // |P/target - 1| <= tol  <=  |ln P - ln target| <= ln(1 + tol) / 2
    let ln_tol = 0.5 * libm::log1p(INVERSION_REL_TOL);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() <= ln_tol {
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(VnrDb(mid))
}

/// The rule that produced a design.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    TruncatedUnionBound,
    BalancedDistance,
    EqualErrorProbability,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::TruncatedUnionBound => "truncated_union_bound",
            Rule::BalancedDistance => "balanced_distance",
            Rule::EqualErrorProbability => "equal_error_probability",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A selected component code and the VNR its lattice needs.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignOutcome {
    pub code: CodeParams,
    pub rule: Rule,
    pub target_pe: f64,
    pub required_vnr_db: f64,
    /// Bound estimate at `required_vnr_db`.
    pub estimated_pe_at_vnr: f64,
    /// Operating point used by the equal error probability rule.
    pub operating_vnr_db: Option<f64>,
}

fn outcome(code: &CodeParams, rule: Rule, target_pe: f64, operating: Option<f64>) -> Result<DesignOutcome> {
    let theta = TruncatedTheta::for_code(code)?;
    let vnr = required_vnr(&theta, code.rate(), target_pe)?;
    Ok(DesignOutcome {
        code: code.clone(),
        rule,
        target_pe,
        required_vnr_db: vnr.0,
        estimated_pe_at_vnr: pe_estimate(&theta, vnr, code.rate())?,
        operating_vnr_db: operating,
    })
}

/// Deterministic preference among equal scores: larger k, smaller tau_c, then name.
fn tie_break(a: &CodeParams, b: &CodeParams) -> Ordering {
    b.k.cmp(&a.k).then(a.tau_c.cmp(&b.tau_c)).then_with(|| a.name.cmp(&b.name))
}

/// Candidate with the least required VNR for `target_pe`.
///
/// Candidates whose estimate cannot reach the target on the default bracket
/// are skipped.
pub fn select_best(candidates: &[CodeParams], target_pe: f64) -> Result<DesignOutcome> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut best: Option<(f64, &CodeParams)> = None;
    for c in candidates {
        let theta = TruncatedTheta::for_code(c)?;
        let vnr = match required_vnr(&theta, c.rate(), target_pe) {
            Ok(v) => v.0,
            Err(Error::BracketFailure { .. }) => continue,
            Err(e) => return Err(e),
        };
        let better = match best {
            None => true,
            Some((bv, bc)) => vnr.total_cmp(&bv).then_with(|| tie_break(c, bc)) == Ordering::Less,
        };
        if better {
            best = Some((vnr, c));
        }
    }
    let (_, code) = best.ok_or(Error::NoCandidates)?;
    outcome(code, Rule::TruncatedUnionBound, target_pe, None)
}

/// Dual form: candidate with the smallest estimate at a fixed VNR, with that estimate.
pub fn select_best_at_vnr(candidates: &[CodeParams], vnr: VnrDb) -> Result<(CodeParams, f64)> {
    let mut best: Option<(f64, &CodeParams)> = None;
    for c in candidates {
        let ln_pe = ln_pe_estimate(&TruncatedTheta::for_code(c)?, vnr, c.rate())?;
        let better = match best {
            None => true,
            Some((bv, bc)) => ln_pe.total_cmp(&bv).then_with(|| tie_break(c, bc)) == Ordering::Less,
        };
        if better {
            best = Some((ln_pe, c));
        }
    }
    let (ln_pe, code) = best.ok_or(Error::NoCandidates)?;
    Ok((code.clone(), libm::exp(ln_pe)))
}

/// Balanced distance rule: the highest-rate candidate with `d_c = 4`, so the
/// code level matches the squared minimum distance of `2Z^n`.
pub fn balanced_distance_pick(candidates: &[CodeParams], target_pe: f64) -> Result<DesignOutcome> {
    let pick = candidates
        .iter()
        .filter(|c| c.d_c == 4)
        .min_by(|a, b| b.rate().total_cmp(&a.rate()).then_with(|| tie_break(a, b)))
        .ok_or(Error::NoCandidates)?;
    outcome(pick, Rule::BalancedDistance, target_pe, None)
}

/// Log word error rate of the `2Z^n` level alone, decided coordinate by
/// coordinate: `1 - (1 - 2 Q(1/sigma))^n`.
pub fn ln_wer_2zn(sigma2: f64, n: usize) -> f64 {
    let x = 1.0 / libm::sqrt(sigma2);
    let q = q_function(x);
    let p = -libm::expm1(n as f64 * libm::log1p(-2.0 * q));
    if p > 1e-300 {
        libm::log(p)
    } else {
        // 1 - (1 - 2q)^n = 2nq (1 + O(nq))
        libm::log(2.0 * n as f64) + ln_q(x)
    }
}

/// Equal error probability rule: the candidate whose code-level estimate is
/// closest, in log ratio, to the `2Z^n`-level word error rate at `vnr`.
pub fn equal_error_probability_pick(candidates: &[CodeParams], vnr: VnrDb, target_pe: f64) -> Result<DesignOutcome> {
    let mut best: Option<(f64, &CodeParams)> = None;
    for c in candidates {
        let gap = eep_log_gap(c, vnr)?;
        let better = match best {
            None => true,
            Some((bg, bc)) => gap.total_cmp(&bg).then_with(|| tie_break(c, bc)) == Ordering::Less,
        };
        if better {
            best = Some((gap, c));
        }
    }
    let (_, code) = best.ok_or(Error::NoCandidates)?;
    outcome(code, Rule::EqualErrorProbability, target_pe, Some(vnr.0))
}

/// `|ln P_code - ln P_2Zn|` for one candidate at `vnr`.
pub fn eep_log_gap(code: &CodeParams, vnr: VnrDb) -> Result<f64> {
    let theta = TruncatedTheta::for_code(code)?;
    let ln_code = ln_pe_estimate(&theta, vnr, code.rate())?;
    let ln_lattice = ln_wer_2zn(sigma2_from_vnr(vnr, code.rate()), code.n);
    Ok((ln_code - ln_lattice).abs())
}

/// Converts VNR to rate-normalized SNR for a lattice code of per-dimension
/// power `power`, rate `lattice_rate` bits/dimension and lattice volume `volume`.
pub fn snr_norm_from_vnr(vnr: VnrDb, power: f64, lattice_rate: f64, volume: f64, n: usize) -> f64 {
    let vol_term = libm::pow(volume, 2.0 / n as f64);
    vnr.0 + 10.0 * libm::log10(TWO_PI_E * power) - 10.0 * libm::log10((libm::exp2(2.0 * lattice_rate) - 1.0) * vol_term)
}

/// VNR in `bracket` where the estimates of `a` and `b` cross, with the
/// common `log10` estimate there. `None` if they do not cross on the bracket.
pub fn crossover_vnr(a: &CodeParams, b: &CodeParams, bracket: (f64, f64)) -> Result<Option<(VnrDb, f64)>> {
    let (ta, tb) = (TruncatedTheta::for_code(a)?, TruncatedTheta::for_code(b)?);
    let diff = |db: f64| -> Result<f64> {
        Ok(ln_pe_estimate(&ta, VnrDb(db), a.rate())? - ln_pe_estimate(&tb, VnrDb(db), b.rate())?)
    };
    let (mut lo, mut hi) = bracket;
    let (d_lo, d_hi) = (diff(lo)?, diff(hi)?);
    if d_lo.signum() == d_hi.signum() {
        return Ok(None);
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (diff(mid)? > 0.0) == (d_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    let at = VnrDb(0.5 * (lo + hi));
    Ok(Some((at, ln_pe_estimate(&ta, at, a.rate())? / core::f64::consts::LN_10)))
}
