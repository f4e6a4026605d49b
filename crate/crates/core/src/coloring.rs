//! Colorings viewed as partitions of the vertex set.
//!
//! Two colorings that differ only by a renaming of the classes are the same
//! solution. [`CanonicalKey`] collapses each such family onto a single value,
//! and [`partition_distance`] measures how many vertices have to move to turn
//! one partition into another.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Class value of a vertex that has not been assigned yet.
pub const UNCOLORED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawColoring")]
pub struct Coloring {
    classes: Vec<u32>,
    k: u32,
}

#[derive(Deserialize)]
struct RawColoring {
    classes: Vec<u32>,
    k: u32,
}

impl TryFrom<RawColoring> for Coloring {
    type Error = Error;

    fn try_from(raw: RawColoring) -> Result<Self> {
        Coloring::from_classes(raw.classes, raw.k)
    }
}

impl Coloring {
    pub fn uncolored(n: usize, k: u32) -> Self {
        Coloring { classes: vec![UNCOLORED; n], k }
    }

    /// Every entry must be `< k` or [`UNCOLORED`].
    pub fn from_classes(classes: Vec<u32>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColorBudget(k));
        }
        if let Some((v, &c)) = classes.iter().enumerate().find(|(_, &c)| c != UNCOLORED && c >= k) {
            return Err(Error::ClassOutOfRange { vertex: v, class: c, k });
        }
        Ok(Coloring { classes, k })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn get(&self, v: usize) -> Option<u32> {
        match self.classes[v] {
            UNCOLORED => None,
            c => Some(c),
        }
    }

    #[inline]
    pub fn set(&mut self, v: usize, class: u32) {
        debug_assert!(class < self.k);
        self.classes[v] = class;
    }

    pub fn unset(&mut self, v: usize) {
        self.classes[v] = UNCOLORED;
    }

    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn is_complete(&self) -> bool {
        self.first_uncolored().is_none()
    }

    fn first_uncolored(&self) -> Option<usize> {
        self.classes.iter().position(|&c| c == UNCOLORED)
    }

    fn require_complete(&self) -> Result<()> {
        match self.first_uncolored() {
            Some(vertex) => Err(Error::IncompleteColoring { vertex }),
            None => Ok(()),
        }
    }

    /// Number of distinct classes actually used.
    pub fn used_classes(&self) -> usize {
        let mut seen = vec![false; self.k as usize];
        for &c in &self.classes {
            if c != UNCOLORED {
                seen[c as usize] = true;
            }
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn is_legal(&self, g: &Graph) -> bool {
        self.is_complete() && self.len() == g.n() && conflicts(g, self) == Ok(0)
    }
}

/// Number of edges whose endpoints share a class.
pub fn conflicts(g: &Graph, c: &Coloring) -> Result<usize> {
    c.require_complete()?;
    if c.len() != g.n() {
        return Err(Error::SizeMismatch { left: g.n(), right: c.len() });
    }
    Ok(g.edges().filter(|&(u, v)| c.classes[u] == c.classes[v]).count())
}

/// Classes renumbered by order of first appearance over vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    /// Builds a key from a class vector that is already in canonical form.
    pub fn from_canonical(classes: Vec<u32>) -> Option<Self> {
        let mut next = 0u32;
        for &c in &classes {
            if c > next {
                return None;
            }
            if c == next {
                next += 1;
            }
        }
        Some(CanonicalKey(classes))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.0.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn to_coloring(&self, k: u32) -> Result<Coloring> {
        Coloring::from_classes(self.0.clone(), k)
    }
}

pub fn canonical_key(c: &Coloring) -> Result<CanonicalKey> {
    c.require_complete()?;
    Ok(canonical_key_of(&c.classes))
}

/// Canonical relabeling of a complete class slice (any labels).
pub(crate) fn canonical_key_of(classes: &[u32]) -> CanonicalKey {
    let mut map: Vec<(u32, u32)> = Vec::new();
    let relabeled = classes
        .iter()
        .map(|&c| match map.iter().find(|(from, _)| *from == c) {
            Some(&(_, to)) => to,
            None => {
                let to = map.len() as u32;
                map.push((c, to));
                to
            }
        })
        .collect();
    CanonicalKey(relabeled)
}

/// `n` minus the largest total overlap of a one-to-one matching between the
/// classes of `c1` and those of `c2`.
pub fn partition_distance(c1: &Coloring, c2: &Coloring) -> Result<usize> {
    if c1.len() != c2.len() {
        return Err(Error::SizeMismatch { left: c1.len(), right: c2.len() });
    }
    let a = canonical_key(c1)?;
    let b = canonical_key(c2)?;
    let size = a.num_classes().max(b.num_classes());
    if size == 0 {
        return Ok(0);
    }
    let mut overlap = vec![vec![0i64; size]; size];
    for (&x, &y) in a.0.iter().zip(&b.0) {
        overlap[x as usize][y as usize] += 1;
    }
    let matched = max_weight_assignment(&overlap);
    Ok(c1.len() - matched as usize)
}

/// Maximum total weight of a perfect matching on a square matrix
/// (Hungarian algorithm with potentials, O(s^3)).
fn max_weight_assignment(w: &[Vec<i64>]) -> i64 {
    let s = w.len();
    let inf = i64::MAX / 4;
    // Minimise -w; rows and columns are 1-based with 0 as the virtual root.
    let mut u = vec![0i64; s + 1];
    let mut v = vec![0i64; s + 1];
    let mut p = vec![0usize; s + 1];
    let mut way = vec![0usize; s + 1];
    for i in 1..=s {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; s + 1];
        let mut used = vec![false; s + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=s {
                if !used[j] {
                    let cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=s {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=s).map(|j| w[p[j] - 1][j - 1]).sum()
}
