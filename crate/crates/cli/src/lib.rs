//! File formats and run orchestration behind the `rsrepair` binary.

pub mod bench;
pub mod csvio;
pub mod dimacs;
pub mod dsl;
pub mod report;
