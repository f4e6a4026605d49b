//! IO, parallel sampling and reporting around `colorclue-core`.

pub mod cli;
pub mod dimacs;
pub mod manifest;
pub mod report;
pub mod sampling;
pub mod survey;
