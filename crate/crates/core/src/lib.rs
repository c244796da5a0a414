//! Variable-metric evolution strategies with a limited-memory covariance model.
//!
//! The crate provides
//!
//! * [`problems`]: single-objective test functions and a family of bi-objective
//!   quadratic problems whose Pareto set is a segment and whose front is the line
//!   from `(0, 1)` to `(1, 0)`,
//! * [`strategies`]: the population-based LM-MA-ES, its elitist (1+1) variant and
//!   a full-rank (1+1) baseline with a rank-one factor update,
//! * [`moea`]: a generic indicator-based multi-objective engine driving a population
//!   of elitist strategies, with non-dominated sorting and 2-D hypervolume,
//! * [`metrics`]: the optimal μ-distribution on the linear front and the hypervolume gap.

pub mod error;
pub mod metrics;
pub mod moea;
pub mod problems;
pub mod rng;
pub mod strategies;

pub use error::{Error, Result};
pub use rng::Rng;
