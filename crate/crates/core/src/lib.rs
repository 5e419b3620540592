//! Representative subset repairs of relations.
//!
//! A subset repair deletes tuples until a relation satisfies its functional
//! dependencies; a *representative* subset repair additionally keeps the
//! proportions of a sensitive attribute above per-value lower bounds. This
//! crate provides the exact algorithms (a dynamic program for LHS-chain FD
//! sets, an integer program with a built-in simplex and branch-and-bound for
//! the general case), the LP-rounding and FD-at-a-time heuristics, the
//! baseline compositions, and the measurement harness: noise injection,
//! stratified sampling, deletion-overhead and repair-quality metrics, the
//! 3-CNF hardness gadget, and brute-force oracles.
//!
//! All repair algorithms are deterministic: ties are broken by fixed rules,
//! so identical inputs give identical outputs.
//!
//! Types are immutable after construction and safe to share across threads;
//! the algorithms are pure functions of their inputs.

pub mod chain_dp;
pub mod conflict;
pub mod error;
pub mod fd;
pub mod gadget;
pub mod heuristics;
pub mod ilp;
pub mod metrics;
pub mod noise;
pub mod oracle;
pub mod rc;
pub mod relation;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};

/// Production scalar for the LP machinery: floating point with a 1e-9
/// comparison tolerance.
pub type FloatScalar = f64;

/// Exact-rational scalar; the oracle instantiation for small models.
pub type ExactScalar = num_rational::BigRational;

/// LP relaxation solution on the float path.
pub type FloatLpSolution = ilp::FractionalSolution<FloatScalar>;

/// LP relaxation solution on the exact-rational path.
pub type ExactLpSolution = ilp::FractionalSolution<ExactScalar>;
