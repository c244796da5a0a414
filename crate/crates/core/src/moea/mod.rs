//! Indicator-based multi-objective engine for two objectives.

mod dominance;
mod engine;
mod hypervolume;
mod ranking;

pub use dominance::{dominates, nondominated_sort};
pub use engine::{
    EngineConfig, GenerationReport, Individual, IndividualKind, MoEngine, Scheme,
};
pub use hypervolume::{hv_contributions_2d, hypervolume_2d};
pub use ranking::{rank_population, select_survivors, RankedPopulation};

/// Objective vector `(f_1, f_2)`.
pub type Objectives = [f64; 2];
