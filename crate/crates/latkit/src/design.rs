//! Candidate sets for the design rules.

use std::collections::BTreeSet;

use latkit_core::bound::{balanced_distance_pick, equal_error_probability_pick, select_best};
use latkit_core::polar::{design_polar, multiplicity_partial_order};
use latkit_core::{CodeParams, DesignOutcome, Family, Registry, VnrDb};

use crate::error::{AppError, AppResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyChoice {
    Ebch,
    Polar,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RuleChoice {
    /// Least required VNR under the truncated union bound.
    Tub,
    /// Highest-rate candidate with d_c = 4.
    Balanced,
    /// Code-level estimate closest to the 2Z^n-level error rate at --vnr-db.
    Eep,
}

/// Row-weight exponent `w` whose layer contains the `k`-th row when rows are
/// taken heaviest first, so that `d_c = 2^w`.
pub fn polar_weight_for_k(m: u32, k: usize) -> Option<u32> {
    let n = 1usize << m;
    if k == 0 || k > n {
        return None;
    }
    (0..=m).rev().find(|&w| (0..n).filter(|i| i.count_ones() >= w).count() >= k)
}

/// The partial-order design with the smallest `tau_c` at length `2^m` and
/// dimension `k`, or `None` if its multiplicity does not fit in `u64`.
pub fn designed_polar(m: u32, k: usize) -> AppResult<Option<CodeParams>> {
    let w = polar_weight_for_k(m, k).ok_or_else(|| AppError::usage(format!("no polar code with k={k} at m={m}")))?;
    let spec = design_polar(m, 1 << w, k)?;
    Ok(match multiplicity_partial_order(&spec) {
        Ok(tau) => Some(CodeParams::new(Family::Polar, 1 << m, k, spec.d_c(), tau)?),
        Err(_) => None,
    })
}

pub fn candidates(family: FamilyChoice, registry: &Registry, polar_m: u32) -> AppResult<Vec<CodeParams>> {
    let mut out: Vec<CodeParams> = Vec::new();
    if matches!(family, FamilyChoice::Ebch | FamilyChoice::All) {
        out.extend(registry.family(Family::Ebch).map(|e| e.params()));
    }
    if matches!(family, FamilyChoice::Polar | FamilyChoice::All) {
        out.extend(registry.family(Family::Polar).map(|e| e.params()));
        for k in 1..=1usize << polar_m {
            out.extend(designed_polar(polar_m, k)?);
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|c| seen.insert((c.family, c.n, c.k, c.d_c, c.tau_c)));
    if out.is_empty() {
        return Err(AppError::usage("no candidate codes with known tau_c"));
    }
    Ok(out)
}

pub fn run_rule(
    rule: RuleChoice,
    cands: &[CodeParams],
    target_pe: f64,
    vnr_db: Option<f64>,
) -> AppResult<DesignOutcome> {
    Ok(match (rule, vnr_db) {
        (RuleChoice::Tub, None) => select_best(cands, target_pe)?,
        (RuleChoice::Balanced, None) => balanced_distance_pick(cands, target_pe).map_err(|e| match e {
            latkit_core::Error::NoCandidates => AppError::usage("balanced rule needs a candidate with d_c = 4"),
            e => e.into(),
        })?,
        (RuleChoice::Eep, Some(v)) => equal_error_probability_pick(cands, VnrDb(v), target_pe)?,
        (RuleChoice::Eep, None) => return Err(AppError::usage("the eep rule needs --vnr-db")),
        (_, Some(_)) => return Err(AppError::usage("--vnr-db only applies to the eep rule")),
    })
}
