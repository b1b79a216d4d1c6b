//! Instance generators, persistence, experiment driver, and CLI support for
//! the bilevel penalty solvers.

pub mod cli;
pub mod experiment;
pub mod generate;
pub mod instance;
pub mod rng;
pub mod tiny;
