//! Independent sets: exact (capped) counting, the independence number, and
//! the two analytic estimates used to judge whether counting is worthwhile.
//!
//! `i(G)` here counts non-empty independent sets only.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::limits::{Budget, Clock, CountResult, SearchLimits};

/// Default enumeration cap.
pub const DEFAULT_IS_CAP: u64 = 10_000_000;

/// Largest `n` accepted by [`brute_force_is_count`].
pub const BRUTE_FORCE_IS_MAX_N: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsCount {
    #[serde(flatten)]
    pub result: CountResult,
    pub cap: u64,
}

impl IsCount {
    pub fn value(&self) -> u64 {
        self.result.value
    }

    pub fn exact(&self) -> bool {
        self.result.exact
    }
}

/// Counts non-empty independent sets by inclusion/exclusion over vertices in
/// index order. Stops once the count exceeds `cap`.
pub fn count_independent_sets(g: &Graph, cap: u64, clock: &dyn Clock) -> Result<IsCount> {
    if cap < 1 {
        return Err(Error::InvalidConfig("independent-set cap must be >= 1"));
    }
    let limits = SearchLimits::unlimited().with_value_cap(cap);
    let mut budget = Budget::new(limits, clock);
    let mut value = 0u64;
    let cand = BitSet::full(g.n());
    extend(g, &cand, &mut value, &mut budget);
    Ok(IsCount { result: budget.finish(value), cap })
}

/// Every vertex `v` of `cand` starts one new set; the recursion continues
/// with the candidates after `v` that are not adjacent to it.
fn extend(g: &Graph, cand: &BitSet, value: &mut u64, budget: &mut Budget<'_>) {
    for v in cand.iter() {
        if !budget.tick() {
            return;
        }
        *value += 1;
        if !budget.value_ok(*value) {
            return;
        }
        let mut next = cand.clone();
        next.clear_through(v);
        next.difference_with(g.neighbors(v));
        if !next.is_empty() {
            extend(g, &next, value, budget);
            if budget.stopped() {
                return;
            }
        }
    }
}

/// Test oracle: scans all `2^n` subsets.
pub fn brute_force_is_count(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > BRUTE_FORCE_IS_MAX_N {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_IS_MAX_N });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u)).collect();
    let mut count = 0u64;
    for s in 1u32..(1u32 << n) {
        let mut rest = s;
        let mut ok = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if adj[v] & s != 0 {
                ok = false;
                break;
            }
            rest &= rest - 1;
        }
        count += ok as u64;
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaBounds {
    pub lb: u32,
    pub ub: u32,
    pub exact: bool,
    /// A maximum (or best found) independent set.
    pub witness: Vec<usize>,
}

/// Independence number via branch and bound for a maximum clique of the
/// complement, with greedy-coloring upper bounds.
pub fn alpha(g: &Graph, limits: &SearchLimits, clock: &dyn Clock) -> AlphaBounds {
    let h = g.complement();
    let n = h.n();
    let mut search = CliqueSearch { g: &h, best: Vec::new(), budget: Budget::new(*limits, clock) };
    let mut current = Vec::new();
    let all = BitSet::full(n);
    let root_bound = color_bound(&h, &all).1.last().copied().unwrap_or(0);
    search.expand(&mut current, all);
    let exact = !search.budget.stopped();
    let lb = search.best.len() as u32;
    let ub = if exact { lb } else { root_bound.max(lb) };
    AlphaBounds { lb, ub, exact, witness: search.best }
}

struct CliqueSearch<'g, 'b> {
    g: &'g Graph,
    best: Vec<usize>,
    budget: Budget<'b>,
}

impl CliqueSearch<'_, '_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut cand: BitSet) {
        let (order, bounds) = color_bound(self.g, &cand);
        for i in (0..order.len()).rev() {
            if current.len() + bounds[i] as usize <= self.best.len() {
                return;
            }
            if !self.budget.tick() {
                return;
            }
            let v = order[i];
            current.push(v);
            let mut next = cand.clone();
            next.intersect_with(self.g.neighbors(v));
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best.clone_from(current);
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            if self.budget.stopped() {
                return;
            }
            cand.remove(v);
        }
    }
}

/// Greedy sequential coloring of `cand`; returns vertices ordered by color
/// and, for each position, the number of colors used up to it.
fn color_bound(g: &Graph, cand: &BitSet) -> (Vec<usize>, Vec<u32>) {
    let mut order = Vec::with_capacity(cand.count());
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut uncolored = cand.clone();
    let mut color = 0u32;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.neighbors(v));
            uncolored.remove(v);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PedersenBound {
    pub value: u64,
    /// `2^alpha` does not fit; `value` is `u64::MAX`.
    pub exceeds_cap: bool,
}

/// `2^alpha + n - alpha`.
pub fn pedersen_lower_bound(n: u64, alpha: u64) -> Result<PedersenBound> {
    if alpha < 1 || alpha > n {
        return Err(Error::InvalidConfig("pedersen bound needs 1 <= alpha <= n"));
    }
    if alpha > 62 {
        return Ok(PedersenBound { value: u64::MAX, exceeds_cap: true });
    }
    match (1u64 << alpha).checked_add(n - alpha) {
        Some(value) => Ok(PedersenBound { value, exceeds_cap: false }),
        None => Ok(PedersenBound { value: u64::MAX, exceeds_cap: true }),
    }
}

/// `sum_{p=1..n} C(n,p) (1-d)^{C(p,2)}`, the expected number of cliques of a
/// random graph, evaluated in the log domain.
pub fn bollobas_estimate(n: u64, d: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidProbability(d));
    }
    if d == 1.0 {
        return Ok(n as f64);
    }
    let log_q = libm::log(1.0 - d);
    let nf = n as f64;
    let ln_n_fact = libm::lgamma(nf + 1.0);
    let terms: Vec<f64> = (1..=n)
        .map(|p| {
            let pf = p as f64;
            let ln_binom = ln_n_fact - libm::lgamma(pf + 1.0) - libm::lgamma(nf - pf + 1.0);
            ln_binom + pf * (pf - 1.0) / 2.0 * log_q
        })
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| libm::exp(t - max)).sum();
    Ok(libm::exp(max) * sum)
}
