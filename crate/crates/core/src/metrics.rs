//! Quality measures for the linear front from `(0, 1)` to `(1, 0)` with the
//! reference point `(10, 10)`.

use crate::error::{Error, Result};
use crate::moea::{hypervolume_2d, Objectives};
use crate::problems::REFERENCE_POINT;

/// Hypervolume dominated by the whole continuous front.
pub const FRONT_HYPERVOLUME: f64 = 99.5;

/// Endpoints of the front plus `μ - 2` equally spaced interior points.
pub fn optimal_mu_distribution(mu: usize) -> Result<Vec<Objectives>> {
    if mu < 2 {
        return Err(Error::contract(format!("optimal μ-distribution needs μ >= 2, got {mu}")));
    }
    let step = (mu - 1) as f64;
    Ok((0..mu)
        .map(|i| {
            let s = i as f64 / step;
            [s, 1.0 - s]
        })
        .collect())
}

/// `99.5 - 1/(2(μ - 1))`.
pub fn optimal_hypervolume(mu: usize) -> Result<f64> {
    if mu < 2 {
        return Err(Error::contract(format!("optimal hypervolume needs μ >= 2, got {mu}")));
    }
    Ok(FRONT_HYPERVOLUME - 1.0 / (2.0 * (mu - 1) as f64))
}

/// Optimal hypervolume for μ points minus the hypervolume of `population`.
///
/// For μ < 2 the optimum is taken as that of μ = 2.
pub fn hypervolume_gap(population: &[Objectives], mu: usize) -> f64 {
    let optimum = optimal_hypervolume(mu.max(2)).expect("μ clamped to 2");
    optimum - hypervolume_2d(population, &REFERENCE_POINT)
}

/// Gap clamped at zero, as written to logs.
pub fn logged_gap(gap: f64) -> f64 {
    gap.max(0.0)
}
