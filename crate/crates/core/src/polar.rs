//! Polar codes: the Kronecker transform, the binary-domination partial order
//! on bit-channel indices, analytic minimum-weight multiplicity for
//! partial-order information sets and a `tau_c`-minimizing design search.
//!
//! Row `i` of the transform `[[1,0],[1,1]]^{(x)m}` has a one in column `c`
//! exactly when the bits of `c` are a subset of the bits of `i`, so its weight
//! is `2^popcount(i)`.
//!
//! Index `j` dominates `i` when `j` is reachable from `i` by setting zero bits
//! and by moving a one bit to a higher zero position. Equivalently, for every
//! bit position `t`, `j` has at least as many ones as `i` in positions `>= t`.
//! An information set has the partial order property when it is closed upward
//! under this relation.

use alloc::vec;
use alloc::vec::Vec;

use crate::binmat::{BitMatrix, BitVector};
use crate::code::{BinaryCode, Family, ENUMERATION_LIMIT};
use crate::error::{invalid, Error, Result};

pub const MAX_M: u32 = 10;
/// Largest number of complete `I'` choices scored exhaustively before
/// [`design_polar`] falls back to greedy selection.
pub const EXHAUSTIVE_LIMIT: usize = 1_000_000;

fn check_m(m: u32) -> Result<()> {
    if (1..=MAX_M).contains(&m) {
        Ok(())
    } else {
        Err(invalid(alloc::format!("polar length exponent must be in 1..={MAX_M}, got {m}")))
    }
}

/// `m`-fold Kronecker power of `[[1,0],[1,1]]`.
pub fn polar_transform(m: u32) -> Result<BitMatrix> {
    check_m(m)?;
    let n = 1usize << m;
    Ok(BitMatrix::from_fn(n, n, |i, c| c & !i == 0))
}

/// Weight of row `i` of the transform.
#[inline]
pub fn row_weight(i: usize) -> u64 {
    1 << i.count_ones()
}

/// True when `j` dominates `i` (`i` precedes `j`) among `m`-bit indices.
pub fn dominates(j: usize, i: usize, m: u32) -> bool {
    let (mut ones_i, mut ones_j) = (0u32, 0u32);
    for t in (0..m).rev() {
        ones_i += ((i >> t) & 1) as u32;
        ones_j += ((j >> t) & 1) as u32;
        if ones_j < ones_i {
            return false;
        }
    }
    true
}

/// True when `info_set` is closed upward under domination.
pub fn check_partial_order(info_set: &[usize], m: u32) -> bool {
    let n = 1usize << m;
    let mut member = vec![false; n];
    for &i in info_set {
        if i >= n {
            return false;
        }
        member[i] = true;
    }
    info_set.iter().all(|&i| (i + 1..n).all(|j| member[j] || !dominates(j, i, m)))
}

/// Information set of `RM(r, m)`: indices with at least `m - r` ones.
pub fn reed_muller_info_set(r: u32, m: u32) -> Vec<usize> {
    (0..1usize << m).filter(|i| i.count_ones() + r >= m).collect()
}

/// A polar code of length `2^m` given by its information set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarSpec {
    m: u32,
    info_set: Vec<usize>,
    satisfies_partial_order: bool,
}

impl PolarSpec {
    pub fn new(m: u32, mut info_set: Vec<usize>) -> Result<Self> {
        check_m(m)?;
        info_set.sort_unstable();
        info_set.dedup();
        if info_set.is_empty() {
            return Err(invalid("information set is empty"));
        }
        if let Some(&bad) = info_set.iter().find(|&&i| i >= 1 << m) {
            return Err(invalid(alloc::format!("index {bad} out of range for m={m}")));
        }
        let satisfies_partial_order = check_partial_order(&info_set, m);
        Ok(PolarSpec { m, info_set, satisfies_partial_order })
    }

    pub fn reed_muller(r: u32, m: u32) -> Result<Self> {
        if r > m {
            return Err(invalid("RM order exceeds m"));
        }
        PolarSpec::new(m, reed_muller_info_set(r, m))
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        1 << self.m
    }

    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn satisfies_partial_order(&self) -> bool {
        self.satisfies_partial_order
    }

    /// Minimum selected row weight.
    pub fn d_c(&self) -> u32 {
        self.info_set.iter().map(|&i| row_weight(i)).min().unwrap() as u32
    }

    /// Indices of minimum row weight.
    pub fn min_weight_rows(&self) -> Vec<usize> {
        let d = self.d_c() as u64;
        self.info_set.iter().copied().filter(|&i| row_weight(i) == d).collect()
    }
}

/// `|K_i|`: indices `j > i` with `wt(g_j) >= wt(g_i + g_j) = wt(g_i)`.
pub fn k_set_size(transform: &BitMatrix, i: usize) -> usize {
    let wi = transform.row_weight(i);
    (i + 1..transform.rows())
        .filter(|&j| {
            let wx: usize = transform
                .row_words(i)
                .iter()
                .zip(transform.row_words(j))
                .map(|(a, b)| (a ^ b).count_ones() as usize)
                .sum();
            wx == wi && transform.row_weight(j) >= wx
        })
        .count()
}

fn pow2(e: usize) -> Result<u64> {
    1u64.checked_shl(e as u32).filter(|_| e < 64).ok_or_else(|| invalid("minimum-weight multiplicity overflows u64"))
}

/// Number of minimum-weight codewords, `sum over I' of 2^|K_i|`. Only valid
/// for partial-order information sets.
pub fn multiplicity_partial_order(spec: &PolarSpec) -> Result<u64> {
    if !spec.satisfies_partial_order {
        return Err(Error::PartialOrderViolated);
    }
    let transform = polar_transform(spec.m)?;
    spec.min_weight_rows().into_iter().try_fold(0u64, |acc, i| {
        acc.checked_add(pow2(k_set_size(&transform, i))?)
            .ok_or_else(|| invalid("minimum-weight multiplicity overflows u64"))
    })
}

struct LayerSearch<'a> {
    /// Layer indices, descending, so dominators precede the indices they dominate.
    layer: &'a [usize],
    /// For each layer position, the earlier positions that dominate it.
    dominators: Vec<Vec<usize>>,
    cost: &'a [u64],
    objective: Objective,
    want: usize,
    visited: usize,
    chosen: Vec<usize>,
    in_set: Vec<bool>,
    best: Option<(u64, Vec<usize>)>,
}

impl LayerSearch<'_> {
    fn consider(&mut self) {
        let tau = self.chosen.iter().fold(0u64, |a, &p| a.saturating_add(self.cost[p]));
        let mut set: Vec<usize> = self.chosen.iter().map(|&p| self.layer[p]).collect();
        set.sort_unstable();
        let better = match &self.best {
            None => true,
            Some((bt, bs)) => match self.objective {
                Objective::MinTau => (tau, &set) < (*bt, bs),
                Objective::MaxTau => tau > *bt || (tau == *bt && set < *bs),
            },
        };
        if better {
            self.best = Some((tau, set));
        }
    }

    /// Returns false once the enumeration budget is exhausted.
    fn run(&mut self, pos: usize) -> bool {
        if self.chosen.len() == self.want {
            self.visited += 1;
            self.consider();
            return self.visited <= EXHAUSTIVE_LIMIT;
        }
        if self.layer.len() - pos < self.want - self.chosen.len() {
            return true;
        }
        if self.dominators[pos].iter().all(|&d| self.in_set[d]) {
            self.chosen.push(pos);
            self.in_set[pos] = true;
            let ok = self.run(pos + 1);
            self.chosen.pop();
            self.in_set[pos] = false;
            if !ok {
                return false;
            }
        }
        self.run(pos + 1)
    }

    fn greedy(&mut self) -> Vec<usize> {
        let mut in_set = vec![false; self.layer.len()];
        let mut set = Vec::with_capacity(self.want);
        for _ in 0..self.want {
            let pick = (0..self.layer.len())
                .filter(|&p| !in_set[p] && self.dominators[p].iter().all(|&d| in_set[d]))
                .min_by(|&a, &b| {
                    let by_cost = self.cost[a].cmp(&self.cost[b]);
                    let by_cost = if self.objective == Objective::MaxTau { by_cost.reverse() } else { by_cost };
                    by_cost.then(self.layer[a].cmp(&self.layer[b]))
                })
                .expect("an admissible index always exists while the layer is not exhausted");
            in_set[pick] = true;
            set.push(self.layer[pick]);
        }
        set.sort_unstable();
        set
    }
}

/// What [`design_polar_with`] optimizes over partial-order completions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    MinTau,
    /// Worst case, for comparing `tau_c` spreads at fixed `(n, k, d_c)`.
    MaxTau,
}

/// Designs a partial-order polar code of length `2^m`, dimension `k` and
/// minimum distance `target_dc`.
///
/// Every row heavier than `target_dc` is taken, then `k - #heavy` rows of
/// weight exactly `target_dc` are added so that the set stays closed under
/// domination and the resulting `tau_c` is as small as possible (ties go to
/// the lexicographically smallest index set).
pub fn design_polar(m: u32, target_dc: u32, k: usize) -> Result<PolarSpec> {
    design_polar_with(m, target_dc, k, Objective::MinTau)
}

/// [`design_polar`] with a selectable objective. Ties always go to the
/// lexicographically smallest index set.
pub fn design_polar_with(m: u32, target_dc: u32, k: usize, objective: Objective) -> Result<PolarSpec> {
    check_m(m)?;
    let n = 1usize << m;
    if !target_dc.is_power_of_two() || target_dc as usize > n {
        return Err(Error::Infeasible(alloc::format!(
            "d_c = {target_dc} is not a row weight of a length-{n} polar code"
        )));
    }
    let w = target_dc.trailing_zeros();
    let heavy: Vec<usize> = (0..n).filter(|i| i.count_ones() > w).collect();
    let layer: Vec<usize> = (0..n).rev().filter(|i| i.count_ones() == w).collect();
    if k <= heavy.len() || k > heavy.len() + layer.len() {
        return Err(Error::Infeasible(alloc::format!(
            "k = {k} needs between {} and {} rows for d_c = {target_dc}",
            heavy.len() + 1,
            heavy.len() + layer.len()
        )));
    }
    let transform = polar_transform(m)?;
    let cost = layer.iter().map(|&i| pow2(k_set_size(&transform, i))).collect::<Result<Vec<_>>>()?;
    let dominators = (0..layer.len()).map(|p| (0..p).filter(|&q| dominates(layer[q], layer[p], m)).collect()).collect();
    let mut search = LayerSearch {
        layer: &layer,
        dominators,
        cost: &cost,
        objective,
        want: k - heavy.len(),
        visited: 0,
        chosen: Vec::new(),
        in_set: vec![false; layer.len()],
        best: None,
    };
    let light = if search.run(0) {
        search.best.take().expect("the top of the layer is always admissible").1
    } else {
        search.greedy()
    };
    let mut info = heavy;
    info.extend(light);
    let spec = PolarSpec::new(m, info)?;
    debug_assert!(spec.satisfies_partial_order && spec.d_c() == target_dc);
    Ok(spec)
}

/// Generator made of the transform rows in the information set. For
/// partial-order sets `d_c` is the minimum row weight and `tau_c` follows
/// from [`multiplicity_partial_order`].
pub fn polar_generator(spec: &PolarSpec) -> Result<BinaryCode> {
    let transform = polar_transform(spec.m)?;
    let rows: Vec<BitVector> = spec.info_set.iter().map(|&i| transform.row(i)).collect();
    let gen = BitMatrix::from_rows(&rows)?;
    let code = BinaryCode::new(Family::Polar.code_name(spec.n(), spec.k()), Family::Polar, gen)?;
    if !spec.satisfies_partial_order {
        return Ok(code);
    }
    Ok(match multiplicity_partial_order(spec) {
        Ok(tau) => code.with_profile(spec.d_c(), tau),
        Err(_) => code.with_min_distance(spec.d_c()),
    })
}

/// One information set visited by [`polar_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub spec: PolarSpec,
    /// `(d_c, tau_c)` when it could be computed: by enumeration for small `k`,
    /// analytically for partial-order sets, otherwise unknown.
    pub profile: Option<(u32, u64)>,
}

/// Visits information sets with all rows heavier than `target_dc` plus any
/// `k - #heavy` rows of weight `target_dc`, partial order or not, in
/// lexicographic order of the light rows, up to `max_sets` sets.
pub fn polar_search(m: u32, target_dc: u32, k: usize, max_sets: usize) -> Result<Vec<SearchHit>> {
    check_m(m)?;
    let n = 1usize << m;
    if !target_dc.is_power_of_two() || target_dc as usize > n {
        return Err(Error::Infeasible(alloc::format!("d_c = {target_dc} is not a row weight")));
    }
    let w = target_dc.trailing_zeros();
    let heavy: Vec<usize> = (0..n).filter(|i| i.count_ones() > w).collect();
    let layer: Vec<usize> = (0..n).filter(|i| i.count_ones() == w).collect();
    if k <= heavy.len() || k > heavy.len() + layer.len() {
        return Err(Error::Infeasible(alloc::format!("k = {k} unreachable at d_c = {target_dc}")));
    }
    let r = k - heavy.len();
    let mut picks: Vec<usize> = (0..r).collect();
    let mut hits = Vec::new();
    while hits.len() < max_sets {
        let mut info = heavy.clone();
        info.extend(picks.iter().map(|&p| layer[p]));
        let spec = PolarSpec::new(m, info)?;
        let profile = if k <= ENUMERATION_LIMIT {
            Some(polar_generator(&spec)?.brute_force_weight_profile()?)
        } else if spec.satisfies_partial_order {
            multiplicity_partial_order(&spec).ok().map(|t| (spec.d_c(), t))
        } else {
            None
        };
        hits.push(SearchHit { spec, profile });
        if !next_combination(&mut picks, layer.len()) {
            break;
        }
    }
    Ok(hits)
}

/// Advances `c` to the next `c.len()`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    let Some(i) = (0..r).rev().find(|&i| c[i] < n - r + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..r {
        c[j] = c[j - 1] + 1;
    }
    true
}
