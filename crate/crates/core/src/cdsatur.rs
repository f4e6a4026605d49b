//! Exact counting of k-colorings up to class permutation, and DSATUR
//! branch-and-bound for the chromatic number.
//!
//! Counting follows the saturation-ordered backtracking scheme: the next
//! vertex is the uncolored one seeing the most distinct colors, and it may
//! take any color its neighbours do not hold among the `used` colors opened
//! so far, or open exactly one new color `used` if `used < k`. Since a
//! branch can open at most one new class, every partition of `V` into at
//! most `k` independent sets is reached by exactly one leaf. No bound-based
//! pruning is applied while counting: every completion has to be visited.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::coloring::{Coloring, UNCOLORED};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::limits::{Budget, Clock, CountResult, SearchLimits};

/// Incremental saturation bookkeeping shared by counting and B&B.
struct SatState<'g> {
    g: &'g Graph,
    width: usize,
    color: Vec<u32>,
    /// `nb[v * width + c]`: colored neighbours of `v` holding `c`.
    nb: Vec<u32>,
    sat: Vec<u32>,
    /// Uncolored neighbours per vertex.
    free_deg: Vec<u32>,
    uncolored: BitSet,
}

impl<'g> SatState<'g> {
    fn new(g: &'g Graph, width: usize) -> Self {
        let n = g.n();
        SatState {
            g,
            width,
            color: vec![UNCOLORED; n],
            nb: vec![0; n * width],
            sat: vec![0; n],
            free_deg: (0..n).map(|v| g.degree(v) as u32).collect(),
            uncolored: BitSet::full(n),
        }
    }

    #[inline]
    fn assign(&mut self, v: usize, c: u32) {
        self.color[v] = c;
        self.uncolored.remove(v);
        let w = self.width;
        for u in self.g.neighbors(v).iter() {
            let slot = &mut self.nb[u * w + c as usize];
            if *slot == 0 {
                self.sat[u] += 1;
            }
            *slot += 1;
            self.free_deg[u] -= 1;
        }
    }

    #[inline]
    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = UNCOLORED;
        self.uncolored.insert(v);
        let w = self.width;
        for u in self.g.neighbors(v).iter() {
            let slot = &mut self.nb[u * w + c as usize];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u] -= 1;
            }
            self.free_deg[u] += 1;
        }
    }

    #[inline]
    fn blocked(&self, v: usize, c: u32) -> bool {
        self.nb[v * self.width + c as usize] > 0
    }

    /// Max saturation, then max degree among uncolored vertices, then lowest index.
    #[inline]
    fn select(&self) -> Option<usize> {
        let mut best: Option<(usize, u32, u32)> = None;
        for v in self.uncolored.iter() {
            let key = (self.sat[v], self.free_deg[v]);
            match best {
                Some((_, s, d)) if (s, d) >= key => {}
                _ => best = Some((v, key.0, key.1)),
            }
        }
        best.map(|(v, _, _)| v)
    }
}

type Visitor<'f> = &'f mut dyn FnMut(&[u32]);

struct Counter<'g, 'b, 'f> {
    state: SatState<'g>,
    k: u32,
    budget: Budget<'b>,
    value: u64,
    visit: Option<Visitor<'f>>,
}

impl Counter<'_, '_, '_> {
    fn recurse(&mut self, used: u32) {
        if !self.budget.tick() {
            return;
        }
        let Some(v) = self.state.select() else {
            self.value += 1;
            if let Some(f) = self.visit.as_mut() {
                f(&self.state.color);
            }
            self.budget.value_ok(self.value);
            return;
        };
        let top = if used < self.k { used } else { used - 1 };
        for c in 0..=top {
            if c < used && self.state.blocked(v, c) {
                continue;
            }
            self.state.assign(v, c);
            self.recurse(used.max(c + 1));
            self.state.unassign(v);
            if self.budget.stopped() {
                return;
            }
        }
    }
}

/// `N(G, k)`: the number of partitions of `V` into at most `k` independent sets.
pub fn count_colorings(g: &Graph, k: u32, limits: &SearchLimits, clock: &dyn Clock) -> Result<CountResult> {
    run_count(g, k, limits, clock, None)
}

/// Like [`count_colorings`], calling `visit` with the class vector of every
/// coloring counted. Classes are numbered in the order the search opened them.
pub fn enumerate_colorings(
    g: &Graph,
    k: u32,
    limits: &SearchLimits,
    clock: &dyn Clock,
    visit: &mut dyn FnMut(&[u32]),
) -> Result<CountResult> {
    run_count(g, k, limits, clock, Some(visit))
}

fn run_count(
    g: &Graph,
    k: u32,
    limits: &SearchLimits,
    clock: &dyn Clock,
    visit: Option<Visitor<'_>>,
) -> Result<CountResult> {
    if k < 1 {
        return Err(Error::InvalidColorBudget(k));
    }
    limits.validate()?;
    let width = (k as usize).min(g.n().max(1));
    let k = width as u32;
    let mut counter =
        Counter { state: SatState::new(g, width), k, budget: Budget::new(*limits, clock), value: 0, visit };
    counter.recurse(0);
    Ok(counter.budget.finish(counter.value))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChromaticBounds {
    pub lb: u32,
    pub ub: u32,
    pub exact: bool,
    /// A legal coloring with `ub` classes.
    pub coloring: Coloring,
    pub nodes: u64,
    pub elapsed: f64,
}

/// Greedy clique: from every start vertex, repeatedly add the candidate
/// with most neighbours among the remaining candidates.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best = Vec::new();
    for start in 0..g.n() {
        let mut clique = vec![start];
        let mut cand = g.neighbors(start).clone();
        while !cand.is_empty() {
            let v =
                cand.iter().max_by_key(|&u| (g.neighbors(u).intersection_count(&cand), core::cmp::Reverse(u))).unwrap();
            clique.push(v);
            cand.intersect_with(g.neighbors(v));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Plain DSATUR greedy coloring.
pub fn dsatur_greedy(g: &Graph) -> Coloring {
    let n = g.n();
    let mut st = SatState::new(g, n.max(1));
    let mut used = 0u32;
    while let Some(v) = st.select() {
        let c = (0..used).find(|&c| !st.blocked(v, c)).unwrap_or(used);
        used = used.max(c + 1);
        st.assign(v, c);
    }
    Coloring::from_classes(st.color, used.max(1)).expect("classes below used")
}

struct BranchAndBound<'g, 'b> {
    state: SatState<'g>,
    budget: Budget<'b>,
    lb: u32,
    best: u32,
    best_colors: Vec<u32>,
}

impl BranchAndBound<'_, '_> {
    fn recurse(&mut self, used: u32) {
        if self.best <= self.lb || !self.budget.tick() {
            return;
        }
        let Some(v) = self.state.select() else {
            if used < self.best {
                self.best = used;
                self.best_colors.clone_from(&self.state.color);
            }
            return;
        };
        for c in 0..=used {
            if c == used && used + 1 >= self.best {
                break;
            }
            if c < used && self.state.blocked(v, c) {
                continue;
            }
            self.state.assign(v, c);
            self.recurse(used.max(c + 1));
            self.state.unassign(v);
            if self.budget.stopped() || self.best <= self.lb {
                return;
            }
        }
    }
}

/// Bounds `lb <= chi(G) <= ub`, equal when the search finishes within limits.
pub fn chromatic_bounds(g: &Graph, limits: &SearchLimits, clock: &dyn Clock) -> ChromaticBounds {
    let n = g.n();
    let budget = Budget::new(*limits, clock);
    if n == 0 {
        return ChromaticBounds {
            lb: 0,
            ub: 0,
            exact: true,
            coloring: Coloring::uncolored(0, 1),
            nodes: 0,
            elapsed: 0.0,
        };
    }
    let clique = greedy_clique(g);
    let greedy = dsatur_greedy(g);
    let lb = clique.len() as u32;
    let ub = greedy.used_classes() as u32;
    let mut bb =
        BranchAndBound { state: SatState::new(g, n), budget, lb, best: ub, best_colors: greedy.classes().to_vec() };
    // Any coloring can be relabeled so the clique gets 0..q-1.
    for (c, &v) in clique.iter().enumerate() {
        bb.state.assign(v, c as u32);
    }
    bb.recurse(lb);
    let exact = !bb.budget.stopped();
    let ub = bb.best;
    ChromaticBounds {
        lb: if exact { ub } else { lb },
        ub,
        exact,
        coloring: Coloring::from_classes(bb.best_colors, ub).expect("best coloring within ub"),
        nodes: bb.budget.nodes,
        elapsed: bb.budget.elapsed(),
    }
}

/// Largest `n` accepted by [`brute_force_count`].
pub const BRUTE_FORCE_MAX_N: usize = 14;

/// `counts[j]`: partitions of `V` into exactly `j` independent sets, by
/// enumerating restricted growth strings in vertex-index order.
pub fn brute_force_counts_by_classes(g: &Graph) -> Result<Vec<u64>> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut counts = vec![0u64; n + 1];
    let mut blocks: Vec<u64> = Vec::with_capacity(n);
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, u| m | 1 << u)).collect();
    fn rec(v: usize, n: usize, adj: &[u64], blocks: &mut Vec<u64>, counts: &mut [u64]) {
        if v == n {
            counts[blocks.len()] += 1;
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b] & adj[v] == 0 {
                blocks[b] |= 1 << v;
                rec(v + 1, n, adj, blocks, counts);
                blocks[b] &= !(1 << v);
            }
        }
        blocks.push(1 << v);
        rec(v + 1, n, adj, blocks, counts);
        blocks.pop();
    }
    rec(0, n, &adj, &mut blocks, &mut counts);
    Ok(counts)
}

/// Test oracle for `N(G, k)`; refuses graphs with more than 14 vertices.
pub fn brute_force_count(g: &Graph, k: u32) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidColorBudget(k));
    }
    let counts = brute_force_counts_by_classes(g)?;
    Ok(counts.iter().take(k as usize + 1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::canonical_key_of;
    use crate::families::{cycle, myciel, path, queen};
    use crate::graph::{generate_random, RandomGraphSpec};
    use crate::limits::{LimitHit, NoClock};
    use std::collections::BTreeSet;

    fn count(g: &Graph, k: u32) -> CountResult {
        count_colorings(g, k, &SearchLimits::unlimited(), &NoClock).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(&Graph::complete(4), 4).value, 1);
        assert_eq!(count(&path(3), 2).value, 1);
        assert_eq!(count(&path(3), 3).value, 2);
        assert_eq!(count(&Graph::complete(5), 3).value, 0);
        assert_eq!(count(&Graph::new(3), 3).value, 5);
        assert!(count(&path(3), 3).exact);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_count(&Graph::new(3), 3), Ok(5));
        assert_eq!(brute_force_count(&Graph::complete(3), 2), Ok(0));
        assert_eq!(brute_force_count(&cycle(5), 3), Ok(5));
        assert_eq!(brute_force_count(&path(3), 2), Ok(1));
        assert_eq!(brute_force_count(&path(3), 3), Ok(2));
        assert!(matches!(brute_force_count(&Graph::new(15), 2), Err(Error::TooLarge { .. })));
        assert_eq!(brute_force_count(&Graph::new(2), 0), Err(Error::InvalidColorBudget(0)));
    }

    #[test]
    fn k_zero_is_rejected() {
        assert_eq!(
            count_colorings(&Graph::new(2), 0, &SearchLimits::unlimited(), &NoClock),
            Err(Error::InvalidColorBudget(0))
        );
    }

    #[test]
    fn myciel3_has_520_four_colorings() {
        let g = myciel(3);
        assert_eq!(count(&g, 4).value, 520);
        assert_eq!(brute_force_count(&g, 4), Ok(520));
        assert_eq!(count(&g, 3).value, 0);
    }

    #[test]
    fn queen5_5_has_two_five_colorings() {
        assert_eq!(count(&queen(5, 5), 5).value, 2);
    }

    #[test]
    fn value_cap_stops_with_lower_bound() {
        let g = Graph::new(6);
        let limits = SearchLimits::unlimited().with_value_cap(10);
        let r = count_colorings(&g, 6, &limits, &NoClock).unwrap();
        assert_eq!(r.value, 11);
        assert!(!r.exact);
        assert_eq!(r.limit_hit, LimitHit::ValueCap);
    }

    #[test]
    fn node_cap_and_time_limit() {
        let g = Graph::new(8);
        let r = count_colorings(&g, 8, &SearchLimits::unlimited().with_node_cap(100), &NoClock).unwrap();
        assert_eq!(r.limit_hit, LimitHit::NodeCap);
        assert!(!r.exact && r.value < 4140);
        let late = || 1.0e9;
        let r = count_colorings(&g, 8, &SearchLimits::new(1.0), &late).unwrap();
        assert!(r.exact, "clock read at start too, so a constant clock never expires");
        let ticks = core::cell::Cell::new(0.0);
        let advancing = || {
            ticks.set(ticks.get() + 1.0);
            ticks.get()
        };
        let r = count_colorings(&g, 8, &SearchLimits::new(0.5), &advancing).unwrap();
        assert_eq!(r.limit_hit, LimitHit::Time);
        assert!(!r.exact);
    }

    #[test]
    fn enumeration_yields_distinct_legal_partitions() {
        for seed in 0..20 {
            let g = generate_random(&RandomGraphSpec::new(9, 0.4, seed)).unwrap();
            for k in 1..=5 {
                let mut keys = BTreeSet::new();
                let mut legal = true;
                let r = enumerate_colorings(&g, k, &SearchLimits::unlimited(), &NoClock, &mut |cls| {
                    legal &= cls.iter().all(|&c| c < k);
                    legal &= g.edges().all(|(u, v)| cls[u] != cls[v]);
                    keys.insert(canonical_key_of(cls));
                })
                .unwrap();
                assert!(legal);
                assert_eq!(keys.len() as u64, r.value, "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn monotone_in_k_and_positive_from_chi() {
        for seed in 0..30 {
            let g = generate_random(&RandomGraphSpec::new(10, 0.5, seed)).unwrap();
            let chi = chromatic_bounds(&g, &SearchLimits::unlimited(), &NoClock);
            assert!(chi.exact && chi.lb == chi.ub);
            let mut prev = 0;
            for k in 1..=10 {
                let v = count(&g, k).value;
                assert!(v >= prev);
                assert_eq!(v > 0, k >= chi.ub, "seed {seed} k {k}");
                prev = v;
            }
        }
    }

    #[test]
    fn chromatic_bounds_examples() {
        let r = chromatic_bounds(&Graph::complete(5), &SearchLimits::unlimited(), &NoClock);
        assert_eq!((r.lb, r.ub), (5, 5));
        let r = chromatic_bounds(&myciel(3), &SearchLimits::unlimited(), &NoClock);
        assert_eq!((r.lb, r.ub), (4, 4));
        assert!(r.coloring.is_legal(&myciel(3)));
        assert_eq!((chromatic_bounds(&Graph::new(3), &SearchLimits::unlimited(), &NoClock)).ub, 1);
        assert_eq!((chromatic_bounds(&cycle(7), &SearchLimits::unlimited(), &NoClock)).ub, 3);
    }

    #[test]
    fn chromatic_bounds_limited_search_leaves_a_gap() {
        let g = myciel(5);
        let r = chromatic_bounds(&g, &SearchLimits::unlimited().with_node_cap(10), &NoClock);
        assert!(!r.exact);
        assert!(r.lb <= 6 && 6 <= r.ub);
        assert!(r.coloring.is_legal(&g));
    }
}
