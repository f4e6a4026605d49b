//! The optimality clue.
//!
//! A clue for `chi(G) = k` is reported when a sample of legal k-colorings
//! produced by independent solver runs contains so few distinct partitions
//! that the experimental upper bound `UB(p, t)` on `N(G, k)` falls below
//! `i(G) - k`. If a (k-1)-coloring existed, recoloring any independent set
//! with a fresh color would give at least `i(G) - k` distinct k-colorings,
//! so a count below that threshold points at `k` being optimal. `UB` is
//! empirical, so the verdict is a clue and not a proof.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cdsatur::count_colorings;
use crate::coloring::{canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::head::{head_solve, SolverConfig, SolverOutcome};
use crate::iscount::{count_independent_sets, IsCount};
use crate::limits::{Clock, SearchLimits};

/// Exponent constant of the upper-bound curve.
pub const DEFAULT_ALPHA: f64 = 1.01;

/// `UB` is infinite once `p >= SATURATION * t`.
pub const SATURATION: f64 = 0.99;

/// `p + p^(alpha (t + p) / t)` when `p < 0.99 t`, otherwise `+inf`.
pub fn ub_estimate(p: usize, t: usize) -> Result<f64> {
    ub_estimate_with_alpha(p, t, DEFAULT_ALPHA)
}

pub fn ub_estimate_with_alpha(p: usize, t: usize, alpha: f64) -> Result<f64> {
    if p < 1 || p > t {
        return Err(Error::InvalidSample { p, t });
    }
    let (pf, tf) = (p as f64, t as f64);
    if pf < tf * SATURATION {
        Ok(pf + libm::pow(pf, alpha * (tf + pf) / tf))
    } else {
        Ok(f64::INFINITY)
    }
}

/// Round half up, for display. `None` for `+inf`.
pub fn ub_rounded(ub: f64) -> Option<u64> {
    ub.is_finite().then(|| libm::floor(ub + 0.5) as u64)
}

/// Probability that `t` uniform draws from `n` items contain a repeat,
/// `1 - exp(-t(t-1) / 2n)`.
pub fn collision_probability(n: u64, t: u64) -> f64 {
    if t <= 1 {
        return 0.0;
    }
    let (nf, tf) = (n as f64, t as f64);
    1.0 - libm::exp(-tf * (tf - 1.0) / (2.0 * nf))
}

/// Exact form `1 - n! / (n^t (n - t)!)` as a running product.
/// Limited to `n <= 10^6`, `t <= 10^4`.
pub fn collision_probability_exact(n: u64, t: u64) -> Result<f64> {
    if n == 0 || n > 1_000_000 || t > 10_000 {
        return Err(Error::InvalidConfig("exact collision probability needs 1 <= n <= 1e6, t <= 1e4"));
    }
    if t > n {
        return Ok(1.0);
    }
    let nf = n as f64;
    let no_repeat: f64 = (0..t).map(|i| (nf - i as f64) / nf).product();
    Ok(1.0 - no_repeat)
}

/// Seed of run `index` under master seed `base`: `base ^ splitmix64(index)`.
pub fn run_seed(base: u64, index: u64) -> u64 {
    let mut z = index.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    base ^ (z ^ (z >> 31))
}

/// Multiset of canonical keys from successful runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub k: u32,
    pub keys: BTreeMap<CanonicalKey, u64>,
    /// Solver time of each successful run, in run-index order.
    pub per_run_elapsed: Vec<f64>,
    /// Seeds of the successful runs, aligned with `per_run_elapsed`.
    pub seeds: Vec<u64>,
    pub failed_runs: u64,
}

impl Sample {
    pub fn new(k: u32) -> Self {
        Sample { k, ..Default::default() }
    }

    /// Number of successful runs.
    pub fn t(&self) -> usize {
        self.keys.values().sum::<u64>() as usize
    }

    /// Number of distinct partitions.
    pub fn p(&self) -> usize {
        self.keys.len()
    }

    pub fn record_success(&mut self, key: CanonicalKey, seed: u64, elapsed: f64) {
        *self.keys.entry(key).or_insert(0) += 1;
        self.seeds.push(seed);
        self.per_run_elapsed.push(elapsed);
    }

    /// Adds a run outcome; failures only bump `failed_runs`.
    pub fn record(&mut self, outcome: &SolverOutcome, seed: u64) {
        if outcome.is_solved() {
            let key = canonical_key(&outcome.coloring).expect("solved colorings are complete");
            self.record_success(key, seed, outcome.elapsed);
        } else {
            self.failed_runs += 1;
        }
    }

    /// Every key decodes to a legal coloring of `g` with at most `k` classes.
    pub fn check_legal(&self, g: &Graph) -> bool {
        self.keys.keys().all(|key| {
            key.len() == g.n() && key.num_classes() <= self.k as usize && {
                let cls = key.as_slice();
                g.edges().all(|(u, v)| cls[u] != cls[v])
            }
        })
    }
}

/// Runs the solver with seeds `run_seed(config.seed, i)` for `i = 0, 1, ...`
/// until `t_target` successes or `run_budget` runs. Each run gets a fresh
/// clock reading window; `clock` is shared.
pub fn build_sample(
    g: &Graph,
    t_target: usize,
    config: &SolverConfig,
    run_budget: u64,
    clock: &dyn Clock,
) -> Result<Sample> {
    if t_target < 1 {
        return Err(Error::InvalidConfig("sample size must be >= 1"));
    }
    config.validate()?;
    let mut sample = Sample::new(config.k);
    for i in 0..run_budget {
        if sample.t() >= t_target {
            break;
        }
        let seed = run_seed(config.seed, i);
        let outcome = head_solve(g, &config.with_seed(seed), clock)?;
        sample.record(&outcome, seed);
    }
    Ok(sample)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Clue,
    NoClueUbTooHigh,
    NoClueSampleSaturated,
    NoClueFewIndependentSets,
    Infeasible,
}

impl Verdict {
    pub fn is_clue(self) -> bool {
        self == Verdict::Clue
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Clue => "CLUE",
            Verdict::NoClueUbTooHigh => "NO_CLUE_UB_TOO_HIGH",
            Verdict::NoClueSampleSaturated => "NO_CLUE_SAMPLE_SATURATED",
            Verdict::NoClueFewIndependentSets => "NO_CLUE_FEW_INDEPENDENT_SETS",
            Verdict::Infeasible => "INFEASIBLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClueReport {
    pub verdict: Verdict,
    pub k: u32,
    pub t: usize,
    pub p: usize,
    /// `+inf` when saturated or infeasible.
    pub ub: f64,
    pub alpha_const: f64,
    pub is_count: IsCount,
    /// `i_lb(G) - k`.
    pub threshold: i64,
}

/// The verdict for `sample` given an independent-set count of the same graph.
/// A capped count still works as a lower bound on `i(G)`.
pub fn evaluate_clue(g: &Graph, k: u32, sample: &Sample, is_count: &IsCount, alpha: f64) -> Result<ClueReport> {
    if k < 1 {
        return Err(Error::InvalidColorBudget(k));
    }
    if !sample.check_legal(g) {
        return Err(Error::IllegalSampleKey);
    }
    let (t, p) = (sample.t(), sample.p());
    let threshold = is_count.value() as i64 - k as i64;
    let report = |verdict, ub| ClueReport { verdict, k, t, p, ub, alpha_const: alpha, is_count: *is_count, threshold };
    if t == 0 {
        return Ok(report(Verdict::Infeasible, f64::INFINITY));
    }
    let ub = ub_estimate_with_alpha(p, t, alpha)?;
    if !ub.is_finite() {
        return Ok(report(Verdict::NoClueSampleSaturated, ub));
    }
    let verdict = if threshold as f64 > ub {
        Verdict::Clue
    } else if is_count.exact() && is_count.value() <= p as u64 {
        Verdict::NoClueFewIndependentSets
    } else {
        Verdict::NoClueUbTooHigh
    };
    Ok(report(verdict, ub))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub k: u32,
    /// Whether some k-coloring exists.
    pub k_colorable: bool,
    pub count_k_plus_1: u64,
    pub is_count: u64,
    /// `N(G, k+1) >= i(G) - k + 1`, or vacuous when not k-colorable.
    pub holds: bool,
    pub exact: bool,
}

/// Checks `N(G, k+1) >= i(G) - k + 1` on a graph small enough to count.
/// Violations are reported, not hidden: the recoloring argument is not
/// injective in degenerate cases such as two isolated vertices with `k = 1`.
pub fn lemma_check(g: &Graph, k: u32, limits: &SearchLimits, clock: &dyn Clock) -> Result<LemmaCheck> {
    let nk = count_colorings(g, k, &SearchLimits { value_cap: Some(0), ..*limits }, clock)?;
    let k_colorable = nk.value > 0;
    let is = count_independent_sets(g, u64::MAX, clock)?;
    let need = (is.value() + 1).saturating_sub(k as u64);
    let nk1 = count_colorings(g, k + 1, &SearchLimits { value_cap: Some(need), ..*limits }, clock)?;
    let exact = (nk.exact || k_colorable) && (nk1.exact || nk1.value >= need);
    Ok(LemmaCheck {
        k,
        k_colorable,
        count_k_plus_1: nk1.value,
        is_count: is.value(),
        holds: !k_colorable || nk1.value >= need,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{myciel, queen};
    use crate::limits::{CountResult, LimitHit, NoClock};

    fn is(value: u64, exact: bool) -> IsCount {
        IsCount {
            result: CountResult {
                value,
                exact,
                limit_hit: if exact { LimitHit::None } else { LimitHit::ValueCap },
                nodes: 0,
                elapsed: 0.0,
            },
            cap: 10_000_000,
        }
    }

    /// Sample with `p` distinct legal keys drawn from a graph's enumeration
    /// and `t` total draws.
    fn synthetic_sample(g: &Graph, k: u32, p: usize, t: usize) -> Sample {
        let mut keys = Vec::new();
        crate::cdsatur::enumerate_colorings(
            g,
            k,
            &SearchLimits::unlimited().with_value_cap(p as u64 - 1),
            &NoClock,
            &mut |c| keys.push(crate::coloring::canonical_key_of(c)),
        )
        .unwrap();
        assert_eq!(keys.len(), p);
        let mut s = Sample::new(k);
        for i in 0..t {
            s.record_success(keys[i % p].clone(), i as u64, 0.0);
        }
        s
    }

    #[test]
    fn ub_calibration_points() {
        assert_eq!(ub_estimate(1, 1000).unwrap(), 2.0);
        assert_eq!(ub_rounded(ub_estimate(20, 1000).unwrap()), Some(42));
        assert_eq!(ub_rounded(ub_estimate(8, 1000).unwrap()), Some(16));
        assert_eq!(ub_rounded(ub_estimate(32, 1000).unwrap()), Some(69));
        assert_eq!(ub_rounded(ub_estimate(96, 1000).unwrap()), Some(252));
        let r = ub_estimate(767, 1000).unwrap();
        assert!(((r - 141_503.0) / 141_503.0).abs() < 1e-3);
        assert_eq!(ub_estimate(999, 1000).unwrap(), f64::INFINITY);
        assert_eq!(ub_estimate(990, 1000).unwrap(), f64::INFINITY);
        assert!(ub_estimate(989, 1000).unwrap().is_finite());
        assert_eq!(ub_rounded(f64::INFINITY), None);
    }

    #[test]
    fn ub_rejects_bad_arguments() {
        assert_eq!(ub_estimate(0, 10), Err(Error::InvalidSample { p: 0, t: 10 }));
        assert_eq!(ub_estimate(11, 10), Err(Error::InvalidSample { p: 11, t: 10 }));
    }

    #[test]
    fn ub_is_monotone_in_p() {
        let t = 1000;
        let mut prev = 0.0;
        for p in 1..990 {
            let ub = ub_estimate(p, t).unwrap();
            assert!(ub >= prev, "p={p}");
            prev = ub;
        }
    }

    #[test]
    fn collision_points() {
        assert!((collision_probability(720_626, 1000) - 0.5).abs() < 1e-3);
        assert!((collision_probability(1_000_000, 1000) - 0.393).abs() < 1e-3);
        assert_eq!(collision_probability(50, 1), 0.0);
        assert_eq!(collision_probability_exact(50, 1).unwrap(), 0.0);
        assert_eq!(collision_probability_exact(3, 4).unwrap(), 1.0);
        // 365 days, 23 people.
        assert!((collision_probability_exact(365, 23).unwrap() - 0.5073).abs() < 1e-3);
        assert!(collision_probability_exact(2_000_000, 10).is_err());
    }

    #[test]
    fn seeds_are_distinct() {
        let seeds: std::collections::BTreeSet<u64> = (0..10_000).map(|i| run_seed(42, i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(run_seed(1, 0), run_seed(2, 0));
    }

    #[test]
    fn verdict_table_rows() {
        let q5 = queen(5, 5);
        let s = synthetic_sample(&q5, 5, 2, 1000);
        let r = evaluate_clue(&q5, 5, &s, &is(461, true), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::Clue);
        assert_eq!((r.t, r.p, r.threshold), (1000, 2, 456));
        assert!((r.ub - 4.0).abs() < 0.1);

        // p = 435 > i = 102: the theorem cannot apply at all.
        let m3 = myciel(3);
        let s = synthetic_sample(&m3, 4, 435, 1000);
        let r = evaluate_clue(&m3, 4, &s, &is(102, true), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::NoClueFewIndependentSets);
        assert_eq!(ub_rounded(r.ub), Some(7105));

        let s = synthetic_sample(&m3, 4, 100, 1000);
        let r = evaluate_clue(&m3, 4, &s, &is(102, true), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::NoClueUbTooHigh);

        let s = synthetic_sample(&m3, 4, 500, 505);
        let r = evaluate_clue(&m3, 4, &s, &is(102, true), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::NoClueSampleSaturated);
        assert!(r.ub.is_infinite());

        let r = evaluate_clue(&m3, 4, &Sample::new(4), &is(102, true), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::Infeasible);
        assert_eq!(r.t, 0);
    }

    #[test]
    fn capped_is_count_still_gives_clue() {
        let q5 = queen(5, 5);
        let s = synthetic_sample(&q5, 5, 1, 1000);
        let r = evaluate_clue(&q5, 5, &s, &is(101, false), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::Clue);
        // A capped count below UB never claims "few independent sets".
        let r = evaluate_clue(&q5, 5, &s, &is(6, false), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.verdict, Verdict::NoClueUbTooHigh);
    }

    #[test]
    fn clue_comparison_is_strict_on_unrounded_ub() {
        // ub(1, t) = 2 exactly; i - k must exceed it.
        let q5 = queen(5, 5);
        let s = synthetic_sample(&q5, 5, 1, 10);
        assert_eq!(evaluate_clue(&q5, 5, &s, &is(7, true), DEFAULT_ALPHA).unwrap().verdict, Verdict::NoClueUbTooHigh);
        assert_eq!(evaluate_clue(&q5, 5, &s, &is(8, true), DEFAULT_ALPHA).unwrap().verdict, Verdict::Clue);
    }

    #[test]
    fn illegal_keys_and_bad_k_are_rejected() {
        let g = Graph::complete(3);
        let mut s = Sample::new(3);
        s.record_success(CanonicalKey::from_canonical(vec![0, 0, 1]).unwrap(), 0, 0.0);
        assert_eq!(evaluate_clue(&g, 3, &s, &is(3, true), DEFAULT_ALPHA), Err(Error::IllegalSampleKey));
        assert_eq!(
            evaluate_clue(&g, 0, &Sample::new(0), &is(3, true), DEFAULT_ALPHA),
            Err(Error::InvalidColorBudget(0))
        );
    }

    #[test]
    fn build_sample_small() {
        let g = Graph::complete(4);
        let s = build_sample(&g, 10, &SolverConfig::new(4), 100, &NoClock).unwrap();
        assert_eq!((s.t(), s.p()), (10, 1));
        assert!(s.check_legal(&g));
        assert_eq!(s.seeds.len(), 10);

        // No 3-coloring of K4: every run fails.
        let mut cfg = SolverConfig::new(3);
        cfg.tabu_iterations = 50;
        cfg.max_generations = 2;
        let s = build_sample(&g, 5, &cfg, 4, &NoClock).unwrap();
        assert_eq!((s.t(), s.failed_runs), (0, 4));
        assert!(build_sample(&g, 0, &cfg, 4, &NoClock).is_err());
    }

    #[test]
    fn queen5_sample_stays_within_n() {
        let g = queen(5, 5);
        let s = build_sample(&g, 200, &SolverConfig::new(5).with_seed(9), 400, &NoClock).unwrap();
        assert_eq!(s.t(), 200);
        assert!(s.p() >= 1 && s.p() <= 2);
    }

    #[test]
    fn lemma_holds_and_fails_where_expected() {
        let r = lemma_check(&queen(5, 5), 5, &SearchLimits::unlimited(), &NoClock).unwrap();
        assert!(r.k_colorable && r.holds && r.exact);
        // Two isolated vertices, k = 1: i = 3 but only 2 partitions into <= 2 sets.
        let r = lemma_check(&Graph::new(2), 1, &SearchLimits::unlimited(), &NoClock).unwrap();
        assert!(r.k_colorable && !r.holds);
        assert_eq!((r.count_k_plus_1, r.is_count), (2, 3));
        let r = lemma_check(&Graph::complete(3), 2, &SearchLimits::unlimited(), &NoClock).unwrap();
        assert!(!r.k_colorable && r.holds);
    }
}
