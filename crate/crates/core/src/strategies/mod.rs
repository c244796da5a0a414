//! Single-objective strategy kernels.
//!
//! [`LmmaState`] is the population-based LM-MA-ES. [`ElitistState`] is its (1+1)
//! counterpart with success-based step-size control, and [`CholeskyState`] is the
//! full-rank (1+1) baseline. The two elitist kinds implement [`VariableMetric`],
//! which is all the multi-objective engine needs from an individual.

mod cholesky;
mod directions;
mod elitist;
mod lmma;

use serde::{Deserialize, Serialize};

pub use cholesky::{CholeskyParams, CholeskyState};
pub use directions::DirectionSet;
pub use elitist::{ElitistParams, ElitistState, Sampling};
pub use lmma::{recombination_weights, GenerationSummary, LmmaParams, LmmaState};

use crate::error::{Error, Result};
use crate::rng::{standard_normal_vec, Rng};

/// Step sizes below this raise [`Error::Stagnation`].
pub const SIGMA_FLOOR: f64 = 1e-300;

/// Default σ₀.
pub const DEFAULT_SIGMA0: f64 = 1.0;

/// Default starting point: i.i.d. standard-normal coordinates.
pub fn initial_point(n: usize, rng: &mut Rng) -> Vec<f64> {
    standard_normal_vec(rng, n)
}

/// `4 + ⌊3 ln n⌋`, the default for λ and for the number of direction vectors.
pub fn default_rank(n: usize) -> usize {
    4 + (3.0 * (n as f64).ln()).floor() as usize
}

/// Success-based step-size multipliers: `σ ← σ·exp(success)` or `σ·exp(failure)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSizeRule {
    pub success: f64,
    pub failure: f64,
}

impl StepSizeRule {
    /// `success = 2/n` and `failure = -success/4`, which is stationary at a
    /// success rate of exactly 1/5.
    pub fn one_fifth(n: usize) -> Self {
        let success = 2.0 / n as f64;
        Self { success, failure: -success / 4.0 }
    }

    pub fn factor(&self, success: bool) -> f64 {
        if success {
            self.success.exp()
        } else {
            self.failure.exp()
        }
    }
}

/// Arithmetic operations spent in sampling and in model updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub sample: u64,
    pub update: u64,
}

/// A standard-normal draw `z` and the candidate it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub z: Vec<f64>,
    pub offspring: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub success: bool,
    pub offspring: Vec<f64>,
    pub offspring_fitness: f64,
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelDigest {
    /// Euclidean norm of each direction vector.
    LowRank { direction_norms: Vec<f64> },
    /// Frobenius norm and trace of the transformation factor.
    FullRank { frobenius: f64, trace: f64 },
}

/// Checkpoint-style summary of a strategy state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub x: Vec<f64>,
    pub sigma: f64,
    pub evaluations: u64,
    pub model: ModelDigest,
}

/// An elitist search distribution `N(x, σ² C)` with fitness cache of type `F`.
pub trait VariableMetric: Clone {
    type Params;
    type Fitness: Clone;

    fn dimension(&self) -> usize;
    fn x(&self) -> &[f64];
    fn fitness(&self) -> &Self::Fitness;
    fn sigma(&self) -> f64;
    fn ops(&self) -> OpCounts;
    fn evaluations(&self) -> u64;

    /// Draws `z ~ N(0, I)` and maps it to an offspring.
    fn sample(&mut self, params: &Self::Params, rng: &mut Rng) -> Sample;

    /// Learns from `z` if `success`, then applies the success-based σ update.
    /// The search point is left alone.
    fn adapt(&mut self, params: &Self::Params, z: &[f64], success: bool);

    /// Replaces the search point and its cached fitness.
    fn relocate(&mut self, x: Vec<f64>, fitness: Self::Fitness);

    fn record_evaluations(&mut self, count: u64);

    fn snapshot(&self) -> StateSnapshot;
}

/// One (1+1) generation: sample, evaluate, accept on `f(y) ≤ f(x)`, adapt.
pub fn elitist_step<S, F>(
    state: &mut S,
    params: &S::Params,
    mut objective: F,
    rng: &mut Rng,
) -> Result<StepOutcome>
where
    S: VariableMetric<Fitness = f64>,
    F: FnMut(&[f64]) -> f64,
{
    let Sample { z, offspring } = state.sample(params, rng);
    let fy = objective(&offspring);
    if !fy.is_finite() {
        return Err(Error::NonFinite { value: fy, evaluations: state.evaluations() + 1 });
    }
    state.record_evaluations(1);
    let success = fy <= *state.fitness();
    if success {
        state.relocate(offspring.clone(), fy);
    }
    state.adapt(params, &z, success);
    check_sigma(state.sigma(), state.evaluations())?;
    Ok(StepOutcome { success, offspring, offspring_fitness: fy, z })
}

pub(crate) fn check_sigma(sigma: f64, evaluations: u64) -> Result<()> {
    if sigma < SIGMA_FLOOR || !sigma.is_finite() {
        Err(Error::Stagnation { sigma, evaluations })
    } else {
        Ok(())
    }
}

pub(crate) fn check_finite(value: f64, evaluations: u64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { value, evaluations })
    }
}

// Counted vector kernels. One multiply and one add are two operations.

pub(crate) fn dot(a: &[f64], b: &[f64], ops: &mut u64) -> f64 {
    *ops += 2 * a.len() as u64;
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64], ops: &mut u64) {
    *ops += 2 * x.len() as u64;
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
