//! Parallel sample construction.
//!
//! Runs are numbered `0, 1, ...` and run `i` always uses seed
//! `run_seed(base, i)`. Runs execute in batches on a fixed-size pool and the
//! sample keeps the first `t` successes by run index, so every worker count
//! yields the same keys, seeds and failure count.

use std::time::Instant;

use colorclue_core::clue::{run_seed, Sample};
use colorclue_core::head::{head_solve, SolverConfig, SolverOutcome};
use colorclue_core::{Clock, Graph};
use rayon::prelude::*;

/// Seconds since construction.
#[derive(Clone, Copy, Debug)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(Instant::now())
    }
}

impl Default for WallClock {
    fn default() -> Self {
        Self::start()
    }
}

impl Clock for WallClock {
    fn elapsed_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

pub struct SampleRequest<'a> {
    pub graph: &'a Graph,
    pub t_target: usize,
    pub config: SolverConfig,
    pub run_budget: u64,
    pub workers: usize,
    /// Give up when this many runs in a row from the start all fail.
    pub abandon_after: Option<u64>,
}

/// Called once per finished run, in run-index order.
pub type RunObserver<'a> = dyn FnMut(u64, u64, &SolverOutcome) + 'a;

pub fn build_sample(req: &SampleRequest<'_>, observe: &mut RunObserver<'_>) -> anyhow::Result<Sample> {
    if req.t_target == 0 {
        anyhow::bail!("sample size must be >= 1");
    }
    req.config.validate()?;
    let workers = req.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let clock = WallClock::start();
    let batch = if workers == 1 { 1 } else { 2 * workers as u64 };

    let abandoned = |s: &Sample, i: u64| s.t() == 0 && req.abandon_after.is_some_and(|a| i >= a);
    let mut sample = Sample::new(req.config.k);
    let mut next = 0u64;
    while next < req.run_budget && sample.t() < req.t_target {
        let end = (next + batch).min(req.run_budget);
        let outcomes = pool.install(|| {
            (next..end)
                .into_par_iter()
                .map(|i| {
                    let seed = run_seed(req.config.seed, i);
                    head_solve(req.graph, &req.config.with_seed(seed), &clock).map(|o| (i, seed, o))
                })
                .collect::<Result<Vec<_>, _>>()
        })?;
        for (i, seed, outcome) in outcomes {
            if sample.t() >= req.t_target || abandoned(&sample, i) {
                break;
            }
            observe(i, seed, &outcome);
            sample.record(&outcome, seed);
        }
        next = end;
        if abandoned(&sample, next) {
            break;
        }
    }
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use colorclue_core::families::queen;

    fn request(g: &Graph, workers: usize) -> SampleRequest<'_> {
        let mut config = SolverConfig::new(5).with_seed(11);
        config.tabu_iterations = 2000;
        SampleRequest { graph: g, t_target: 12, config, run_budget: 40, workers, abandon_after: None }
    }

    #[test]
    fn worker_count_does_not_change_sample() {
        let g = queen(5, 5);
        let one = build_sample(&request(&g, 1), &mut |_, _, _| {}).unwrap();
        let three = build_sample(&request(&g, 3), &mut |_, _, _| {}).unwrap();
        assert_eq!(one.keys, three.keys);
        assert_eq!(one.seeds, three.seeds);
        assert_eq!(one.failed_runs, three.failed_runs);
        assert_eq!(one.t(), 12);
        assert!(one.p() <= 2);
    }

    #[test]
    fn observer_sees_runs_in_order() {
        let g = queen(5, 5);
        let mut seen = Vec::new();
        build_sample(&request(&g, 2), &mut |i, _, _| seen.push(i)).unwrap();
        assert!(seen.windows(2).all(|w| w[1] == w[0] + 1));
        assert_eq!(seen[0], 0);
    }

    #[test]
    fn abandons_infeasible_budget() {
        let g = queen(5, 5);
        let mut req = request(&g, 1);
        req.config.k = 4;
        req.config.max_generations = 2;
        req.config.tabu_iterations = 200;
        req.abandon_after = Some(3);
        for workers in [1, 4] {
            req.workers = workers;
            let s = build_sample(&req, &mut |_, _, _| {}).unwrap();
            assert_eq!((s.t(), s.failed_runs), (0, 3));
        }
    }

    #[test]
    fn zero_target_rejected() {
        let g = queen(5, 5);
        let mut req = request(&g, 1);
        req.t_target = 0;
        assert!(build_sample(&req, &mut |_, _, _| {}).is_err());
    }
}
