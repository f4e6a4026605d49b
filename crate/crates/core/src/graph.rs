//! Undirected simple graphs with bitset adjacency.
//!
//! Vertices are `0..n`. A [`Graph`] is built incrementally with
//! [`Graph::add_edge`] and then treated as read-only by every algorithm in
//! the crate, so a shared `&Graph` can be handed to any number of workers.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BitSet>,
    m: usize,
    name: Option<String>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { adj: (0..n).map(|_| BitSet::new(n)).collect(), m: 0, name: None }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_unchecked(u, v);
            }
        }
        g
    }

    /// Inserts `{u, v}`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        if self.adj[u].contains(v) {
            return Ok(false);
        }
        self.insert_unchecked(u, v);
        Ok(true)
    }

    fn insert_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.m += 1;
    }

    /// Copy of the graph with `{u, v}` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if u != v && u < g.n() && v < g.n() && g.adj[u].contains(v) {
            g.adj[u].remove(v);
            g.adj[v].remove(u);
            g.m -= 1;
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| nb.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.set_name(name);
        self
    }

    /// `2m / (n(n-1))`.
    pub fn density(&self) -> Result<f64> {
        let n = self.n();
        if n < 2 {
            return Err(Error::UndefinedDensity { n });
        }
        Ok(2.0 * self.m as f64 / (n as f64 * (n as f64 - 1.0)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut adj = Vec::with_capacity(n);
        let mut m2 = 0;
        for v in 0..n {
            let mut s = BitSet::full(n);
            s.difference_with(&self.adj[v]);
            s.remove(v);
            m2 += s.count();
            adj.push(s);
        }
        Graph { adj, m: m2 / 2, name: self.name.clone() }
    }

    /// Sum of adjacency cardinalities equals `2m` and adjacency is symmetric
    /// without loops. Used by tests and debug assertions.
    pub fn check_invariants(&self) -> bool {
        let n = self.n();
        let mut sum = 0;
        for u in 0..n {
            if self.adj[u].contains(u) {
                return false;
            }
            for v in self.adj[u].iter() {
                if !self.adj[v].contains(u) {
                    return false;
                }
            }
            sum += self.adj[u].count();
        }
        sum == 2 * self.m
    }
}

/// Parameters of an Erdős–Rényi `G(n, d)` instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomGraphSpec {
    pub n: usize,
    pub d: f64,
    pub seed: u64,
}

impl RandomGraphSpec {
    pub fn new(n: usize, d: f64, seed: u64) -> Self {
        RandomGraphSpec { n, d, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::EmptyGraph);
        }
        if !(0.0..=1.0).contains(&self.d) {
            return Err(Error::InvalidProbability(self.d));
        }
        Ok(())
    }
}

/// Each of the `n(n-1)/2` pairs is an edge independently with probability `d`.
/// Pure function of `(n, d, seed)`.
pub fn generate_random(spec: &RandomGraphSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut g = Graph::new(spec.n);
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            // One draw per pair keeps the stream layout independent of d.
            let x: f64 = rng.gen();
            if x < spec.d {
                g.insert_unchecked(u, v);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn k3_basics() {
        let g = Graph::complete(3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.density().unwrap(), 1.0);
        assert_eq!(g.max_degree(), 2);
        assert!(g.check_invariants());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let mut g = Graph::new(3);
        assert!(g.add_edge(0, 1).unwrap());
        assert!(!g.add_edge(1, 0).unwrap());
        assert!(!g.add_edge(0, 1).unwrap());
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(Error::SelfLoop { vertex: 1 }));
        assert_eq!(g.add_edge(0, 3), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn density_edge_cases() {
        assert_eq!(Graph::new(4).density().unwrap(), 0.0);
        assert_eq!(Graph::new(1).density(), Err(Error::UndefinedDensity { n: 1 }));
        assert_eq!(Graph::new(0).density(), Err(Error::UndefinedDensity { n: 0 }));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(3).complement(), Graph::new(3));
        assert_eq!(Graph::new(3).complement(), Graph::complete(3));
        let c = path3().complement();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn random_extremes() {
        for seed in 0..5 {
            let empty = generate_random(&RandomGraphSpec::new(5, 0.0, seed)).unwrap();
            assert_eq!(empty.m(), 0);
            let full = generate_random(&RandomGraphSpec::new(5, 1.0, seed)).unwrap();
            assert_eq!(full, Graph::complete(5));
            assert_eq!(full.density().unwrap(), 1.0);
        }
    }

    #[test]
    fn random_spec_validation() {
        assert!(generate_random(&RandomGraphSpec::new(0, 0.5, 1)).is_err());
        assert!(generate_random(&RandomGraphSpec::new(4, 1.5, 1)).is_err());
        assert!(generate_random(&RandomGraphSpec::new(4, -0.1, 1)).is_err());
    }

    #[test]
    fn random_edge_count_statistics() {
        // Binomial(4950, 0.5): mean 2475, sd ≈ 35.18. The mean of 1000
        // independent counts has sd ≈ 1.11.
        let trials = 1000;
        let total: usize = (0..trials).map(|s| generate_random(&RandomGraphSpec::new(100, 0.5, s)).unwrap().m()).sum();
        let mean = total as f64 / trials as f64;
        let sd_of_mean = (4950.0f64 * 0.25).sqrt() / (trials as f64).sqrt();
        assert!((mean - 2475.0).abs() < 3.0 * sd_of_mean, "mean {mean}");
    }
}
