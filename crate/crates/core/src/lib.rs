//! First-order penalty solvers for bilevel optimization.
//!
//! Bilevel problems with convex lower levels are rewritten as structured
//! nonconvex-concave minimax problems via penalty reformulation, solved by
//! a first-order smoothing method whose subproblems go to an optimal
//! strongly-convex-strongly-concave solver, and the output is certified by
//! approximate-KKT residual checks and closed-form complexity bounds.
//!
//! Layering, bottom up:
//! - [`math`]: vectors, boxes, prox terms, normal cones
//! - [`problems`]: oracles with evaluation counting, problem data model
//! - [`saddle`]: the SCSC minimax solver and the APG subsolver
//! - [`outer`]: the nonconvex-concave smoothing method
//! - [`penalty`]: penalty assembly, practical methods, continuation
//! - [`certificates`]: approximate-KKT residuals, multipliers, hypergradient
//! - [`bounds`]: closed-form complexity constants for conformance tests

pub mod bounds;
pub mod certificates;
pub mod error;
pub mod math;
pub mod outer;
pub mod penalty;
pub mod problems;
pub mod saddle;

pub use error::{Error, Result};
pub use math::{BoxSet, ProxTerm, Vector};
pub use problems::{
    ConBilevelProblem, MinimaxProblem, OracleCounters, SmoothOracle, UncBilevelProblem,
    VectorOracle,
};
