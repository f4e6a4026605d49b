//! Two-member memetic search for legal k-colorings.
//!
//! The population is a pair of (possibly conflicting) k-colorings. Every
//! generation crosses the pair in both orders with GPX and improves each
//! child by TabuCol. Two elite slots remember good colorings from recent
//! cycles and replace a member when the pair collapses onto one partition.
//!
//! Everything is driven by one seeded RNG, so a run is a pure function of
//! `(graph, config)` unless the time budget cuts it short.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{canonical_key, conflicts, Coloring, UNCOLORED};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::limits::Clock;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k: u32,
    /// Tabu iterations per offspring per generation.
    pub tabu_iterations: u64,
    pub tenure_base: u32,
    pub tenure_slope: f64,
    pub max_generations: u64,
    /// Seconds.
    pub time_budget: f64,
    pub seed: u64,
    /// Generations between elite rotations.
    pub elite_cycle: u64,
}

impl SolverConfig {
    pub fn new(k: u32) -> Self {
        SolverConfig {
            k,
            tabu_iterations: 20_000,
            tenure_base: 9,
            tenure_slope: 0.6,
            max_generations: 100_000,
            time_budget: 60.0,
            seed: 0,
            elite_cycle: 10,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tabu_params(&self) -> TabuParams {
        TabuParams { iterations: self.tabu_iterations, tenure_base: self.tenure_base, tenure_slope: self.tenure_slope }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidColorBudget(self.k));
        }
        if self.tabu_iterations == 0 || self.max_generations == 0 || self.elite_cycle == 0 {
            return Err(Error::InvalidConfig("iteration and generation counts must be positive"));
        }
        if self.time_budget.is_nan() || self.time_budget <= 0.0 {
            return Err(Error::InvalidConfig("time budget must be positive"));
        }
        if self.tenure_slope.is_nan() || self.tenure_slope < 0.0 {
            return Err(Error::InvalidConfig("tenure slope must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabuParams {
    pub iterations: u64,
    pub tenure_base: u32,
    pub tenure_slope: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    ExhaustedTime,
    ExhaustedGenerations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub status: SolveStatus,
    /// Legal when `status` is `Solved`; otherwise the least conflicting coloring seen.
    pub coloring: Coloring,
    pub best_conflicts: usize,
    pub generations: u64,
    pub iterations_total: u64,
    #[serde(rename = "elapsed_s")]
    pub elapsed: f64,
}

impl SolverOutcome {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

/// Uniform class in `0..k` for every vertex.
pub fn random_coloring<R: Rng + ?Sized>(g: &Graph, k: u32, rng: &mut R) -> Coloring {
    let classes = (0..g.n()).map(|_| rng.gen_range(0..k)).collect();
    Coloring::from_classes(classes, k.max(1)).expect("classes below k")
}

#[derive(Clone, Debug, PartialEq)]
pub struct TabuOutcome {
    pub coloring: Coloring,
    pub conflicts: usize,
    pub iterations: u64,
}

fn require_shape(g: &Graph, c: &Coloring, k: u32) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidColorBudget(k));
    }
    if c.len() != g.n() {
        return Err(Error::SizeMismatch { left: g.n(), right: c.len() });
    }
    for (v, &cls) in c.classes().iter().enumerate() {
        if cls == UNCOLORED {
            return Err(Error::IncompleteColoring { vertex: v });
        }
        if cls >= k {
            return Err(Error::ClassOutOfRange { vertex: v, class: cls, k });
        }
    }
    Ok(())
}

/// Vertices whose own class appears among their neighbours, with O(1)
/// insert/remove.
struct ConflictSet {
    items: Vec<usize>,
    pos: Vec<usize>,
}

impl ConflictSet {
    const ABSENT: usize = usize::MAX;

    fn new(n: usize) -> Self {
        ConflictSet { items: Vec::new(), pos: vec![Self::ABSENT; n] }
    }

    fn insert(&mut self, v: usize) {
        if self.pos[v] == Self::ABSENT {
            self.pos[v] = self.items.len();
            self.items.push(v);
        }
    }

    fn remove(&mut self, v: usize) {
        let p = self.pos[v];
        if p != Self::ABSENT {
            let last = self.items.pop().unwrap();
            if last != v {
                self.items[p] = last;
                self.pos[last] = p;
            }
            self.pos[v] = Self::ABSENT;
        }
    }
}

/// TabuCol. Moves recolor one conflicting vertex; after moving `v` out of
/// class `c`, putting it back into `c` is tabu for
/// `uniform(0..=tenure_base) + floor(tenure_slope * conflicts)` iterations.
/// A tabu move is accepted when it beats the best conflict count so far.
/// Returns the best coloring visited.
pub fn tabu_search<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    k: u32,
    params: &TabuParams,
    rng: &mut R,
) -> Result<TabuOutcome> {
    require_shape(g, start, k)?;
    let n = g.n();
    let ku = k as usize;
    let mut cls: Vec<u32> = start.classes().to_vec();
    let mut gamma = vec![0u32; n * ku];
    for (u, v) in g.edges() {
        gamma[u * ku + cls[v] as usize] += 1;
        gamma[v * ku + cls[u] as usize] += 1;
    }
    let mut conflicting = ConflictSet::new(n);
    let mut f: i64 = 0;
    for v in 0..n {
        let own = gamma[v * ku + cls[v] as usize];
        if own > 0 {
            conflicting.insert(v);
            f += own as i64;
        }
    }
    f /= 2;
    let mut best_f = f;
    let mut best = cls.clone();
    let mut tabu = vec![0u64; n * ku];
    let mut iter = 0u64;

    while iter < params.iterations && f > 0 {
        iter += 1;
        let mut best_delta = i64::MAX;
        let mut chosen: Option<(usize, u32)> = None;
        let mut ties = 0u32;
        for &v in &conflicting.items {
            let cv = cls[v] as usize;
            let gv = gamma[v * ku + cv] as i64;
            for c in 0..ku {
                if c == cv {
                    continue;
                }
                let delta = gamma[v * ku + c] as i64 - gv;
                if tabu[v * ku + c] >= iter && f + delta >= best_f {
                    continue;
                }
                if delta < best_delta {
                    best_delta = delta;
                    chosen = Some((v, c as u32));
                    ties = 1;
                } else if delta == best_delta {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        chosen = Some((v, c as u32));
                    }
                }
            }
        }
        let (v, to) = match chosen {
            Some(m) => m,
            None if ku > 1 => {
                // Everything tabu: random move on a conflicting vertex.
                let v = conflicting.items[rng.gen_range(0..conflicting.items.len())];
                let mut to = rng.gen_range(0..k - 1);
                if to >= cls[v] {
                    to += 1;
                }
                best_delta = gamma[v * ku + to as usize] as i64 - gamma[v * ku + cls[v] as usize] as i64;
                (v, to)
            }
            None => break,
        };
        let from = cls[v];
        cls[v] = to;
        f += best_delta;
        for u in g.neighbors(v).iter() {
            let old_slot = u * ku + from as usize;
            gamma[old_slot] -= 1;
            if cls[u] == from && gamma[old_slot] == 0 {
                conflicting.remove(u);
            }
            let new_slot = u * ku + to as usize;
            gamma[new_slot] += 1;
            if cls[u] == to {
                conflicting.insert(u);
            }
        }
        if gamma[v * ku + to as usize] > 0 {
            conflicting.insert(v);
        } else {
            conflicting.remove(v);
        }
        let tenure = rng.gen_range(0..=params.tenure_base) as u64 + (params.tenure_slope * f as f64) as u64;
        tabu[v * ku + from as usize] = iter + tenure;
        if f < best_f {
            best_f = f;
            best.clone_from(&cls);
        }
    }
    Ok(TabuOutcome {
        coloring: Coloring::from_classes(best, k).expect("classes below k"),
        conflicts: best_f as usize,
        iterations: iter,
    })
}

/// Greedy partition crossover. Step `s` (0-based) takes the largest class
/// still left in `p1` when `s` is even and in `p2` when odd, gives it child
/// class `s`, and deletes its vertices from both parents. Lowest label wins
/// ties. Vertices left after `k` steps get a uniform random class.
pub fn gpx_crossover<R: Rng + ?Sized>(p1: &Coloring, p2: &Coloring, k: u32, rng: &mut R) -> Result<Coloring> {
    if p1.len() != p2.len() {
        return Err(Error::SizeMismatch { left: p1.len(), right: p2.len() });
    }
    let n = p1.len();
    let ku = k as usize;
    for p in [p1, p2] {
        if k < 1 {
            return Err(Error::InvalidColorBudget(k));
        }
        for (v, &c) in p.classes().iter().enumerate() {
            if c == UNCOLORED {
                return Err(Error::IncompleteColoring { vertex: v });
            }
            if c >= k {
                return Err(Error::ClassOutOfRange { vertex: v, class: c, k });
            }
        }
    }
    let parents = [p1.classes(), p2.classes()];
    let mut sizes = [vec![0usize; ku], vec![0usize; ku]];
    for (side, p) in parents.iter().enumerate() {
        for &c in p.iter() {
            sizes[side][c as usize] += 1;
        }
    }
    let mut child = vec![UNCOLORED; n];
    let mut left = n;
    for step in 0..ku {
        if left == 0 {
            break;
        }
        let side = step % 2;
        let (class, _) =
            sizes[side].iter().enumerate().fold((0, 0), |(bc, bs), (c, &s)| if s > bs { (c, s) } else { (bc, bs) });
        if sizes[side][class] == 0 {
            break;
        }
        for v in 0..n {
            if child[v] == UNCOLORED && parents[side][v] as usize == class {
                child[v] = step as u32;
                left -= 1;
                sizes[0][parents[0][v] as usize] -= 1;
                sizes[1][parents[1][v] as usize] -= 1;
            }
        }
    }
    for c in child.iter_mut().filter(|c| **c == UNCOLORED) {
        *c = rng.gen_range(0..k);
    }
    Coloring::from_classes(child, k)
}

#[derive(Clone)]
struct Member {
    coloring: Coloring,
    conflicts: usize,
}

impl Member {
    fn random(g: &Graph, k: u32, rng: &mut ChaCha8Rng) -> Member {
        let coloring = random_coloring(g, k, rng);
        let conflicts = conflicts(g, &coloring).expect("complete");
        Member { coloring, conflicts }
    }

    fn same_partition(&self, other: &Member) -> bool {
        canonical_key(&self.coloring).ok() == canonical_key(&other.coloring).ok()
    }
}

/// Runs the memetic search until a legal k-coloring appears or the
/// generation or time budget runs out.
pub fn head_solve(g: &Graph, config: &SolverConfig, clock: &dyn Clock) -> Result<SolverOutcome> {
    config.validate()?;
    let start = clock.elapsed_secs();
    let k = config.k;
    let params = config.tabu_params();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut iterations_total = 0u64;
    let mut generations = 0u64;

    let improve = |c: &Coloring, rng: &mut ChaCha8Rng, total: &mut u64| -> Member {
        let out = tabu_search(g, c, k, &params, rng).expect("shape checked");
        *total += out.iterations;
        Member { coloring: out.coloring, conflicts: out.conflicts }
    };

    let done = |m: &Member, status: SolveStatus, generations: u64, total: u64| SolverOutcome {
        status,
        coloring: m.coloring.clone(),
        best_conflicts: m.conflicts,
        generations,
        iterations_total: total,
        elapsed: clock.elapsed_secs() - start,
    };

    let r1 = Member::random(g, k, &mut rng);
    let mut p1 = improve(&r1.coloring, &mut rng, &mut iterations_total);
    if p1.conflicts == 0 {
        return Ok(done(&p1, SolveStatus::Solved, 0, iterations_total));
    }
    let r2 = Member::random(g, k, &mut rng);
    let mut p2 = improve(&r2.coloring, &mut rng, &mut iterations_total);
    if p2.conflicts == 0 {
        return Ok(done(&p2, SolveStatus::Solved, 0, iterations_total));
    }
    let mut elite1 = if p1.conflicts <= p2.conflicts { p1.clone() } else { p2.clone() };
    let mut elite2 = Member::random(g, k, &mut rng);
    let mut best = elite1.clone();

    loop {
        if generations >= config.max_generations {
            return Ok(done(&best, SolveStatus::ExhaustedGenerations, generations, iterations_total));
        }
        if clock.elapsed_secs() - start > config.time_budget {
            return Ok(done(&best, SolveStatus::ExhaustedTime, generations, iterations_total));
        }
        let c1 = gpx_crossover(&p1.coloring, &p2.coloring, k, &mut rng)?;
        let c2 = gpx_crossover(&p2.coloring, &p1.coloring, k, &mut rng)?;
        p1 = improve(&c1, &mut rng, &mut iterations_total);
        generations += 1;
        if p1.conflicts == 0 {
            return Ok(done(&p1, SolveStatus::Solved, generations, iterations_total));
        }
        p2 = improve(&c2, &mut rng, &mut iterations_total);
        if p2.conflicts == 0 {
            return Ok(done(&p2, SolveStatus::Solved, generations, iterations_total));
        }
        for m in [&p1, &p2] {
            if m.conflicts < elite1.conflicts {
                elite1 = m.clone();
            }
            if m.conflicts < best.conflicts {
                best = m.clone();
            }
        }
        if generations % config.elite_cycle == 0 {
            // Bring back the previous cycle's elite; start tracking a new one.
            p1 = core::mem::replace(&mut elite2, elite1.clone());
            elite1 = Member::random(g, k, &mut rng);
        }
        if p1.same_partition(&p2) {
            if !elite2.same_partition(&p1) {
                p2 = core::mem::replace(&mut elite2, Member::random(g, k, &mut rng));
            } else if !elite1.same_partition(&p1) {
                p2 = core::mem::replace(&mut elite1, Member::random(g, k, &mut rng));
            } else {
                p2 = Member::random(g, k, &mut rng);
                elite1 = Member::random(g, k, &mut rng);
                elite2 = Member::random(g, k, &mut rng);
            }
        }
    }
}
