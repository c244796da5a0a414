//! Benchmark problems.

mod biobjective;
mod quadratic;
mod single;

pub use biobjective::{
    make_biobjective, BiObjectiveProblem, ProblemDescriptor, PROBLEM_IDS, REFERENCE_POINT,
};
pub use quadratic::{log_uniform_spectrum, random_rotation, QuadraticForm, Rotation};
pub use single::{SingleKind, SingleObjectiveProblem};

/// Default condition number of the ellipsoid Hessians.
pub const DEFAULT_CONDITION: f64 = 1e3;
