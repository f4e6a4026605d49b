//! Counting and sampling k-colorings of graphs, and the optimality clue built on them.
//!
//! The crate is `no_std` (it needs `alloc`). Anything that touches the
//! outside world, such as files, wall clocks and thread pools, lives in the
//! `colorclue` companion crate. Search routines that honour a time budget
//! take a [`Clock`] so the caller decides what "elapsed" means.
//!
//! Module map:
//!
//! - [`graph`]: bitset-adjacency graphs, random instances, named families
//! - [`coloring`]: colorings as partitions, canonical keys, partition distance
//! - [`cdsatur`]: exact counting of k-colorings and chromatic bounds
//! - [`iscount`]: independent-set counting, `alpha`, analytic bounds
//! - [`head`]: the two-member memetic solver (tabu search + GPX)
//! - [`clue`]: sampling, the upper-bound estimator and the clue verdict
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bitset;
pub mod cdsatur;
pub mod clue;
pub mod coloring;
mod error;
pub mod families;
pub mod graph;
pub mod head;
pub mod iscount;
pub mod limits;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use graph::{Graph, RandomGraphSpec};
pub use limits::{Clock, CountResult, LimitHit, NoClock, SearchLimits};
