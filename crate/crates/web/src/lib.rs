//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exposed: stepping the multi-objective engine on one of
//! the bi-objective problems, tracing a single-objective run, and evaluating
//! hypervolume and contributions of a hand-placed point set. Point sets cross
//! the boundary as flat `[f1, f2, f1, f2, ...]` arrays.

use lmmaes::metrics::{hypervolume_gap, optimal_mu_distribution};
use lmmaes::moea::{
    hv_contributions_2d, hypervolume_2d, nondominated_sort, EngineConfig, IndividualKind, MoEngine, Objectives,
};
use lmmaes::problems::{make_biobjective, BiObjectiveProblem, SingleKind, SingleObjectiveProblem, REFERENCE_POINT};
use lmmaes::rng::seeded;
use lmmaes::strategies::{initial_point, ElitistParams, ElitistState};
use lmmaes::{Error, Rng};
use wasm_bindgen::prelude::*;

fn flatten(points: &[Objectives]) -> Vec<f64> {
    points.iter().flat_map(|p| [p[0], p[1]]).collect()
}

fn unflatten(flat: &[f64]) -> Result<Vec<Objectives>, String> {
    if !flat.len().is_multiple_of(2) {
        return Err(format!("expected an even number of coordinates, got {}", flat.len()));
    }
    Ok(flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect())
}

fn message(e: Error) -> String {
    e.to_string()
}

/// A running multi-objective optimization with low-rank individuals.
#[wasm_bindgen]
pub struct MoDemo {
    problem: BiObjectiveProblem,
    engine: MoEngine<ElitistState<Objectives>>,
    rng: Rng,
    gaps: Vec<f64>,
    evaluations: Vec<f64>,
}

#[wasm_bindgen]
impl MoDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(problem_id: u32, n: usize, mu: usize, seed: u32) -> Result<MoDemo, String> {
        let problem = make_biobjective(problem_id, n, 1e3, seed.into()).map_err(message)?;
        let mut rng = seeded(seed.into());
        let engine = MoEngine::low_rank(&problem, EngineConfig::new(mu, IndividualKind::LowRank), 1.0, &mut rng)
            .map_err(message)?;
        let report = engine.report();
        Ok(MoDemo { problem, engine, rng, gaps: vec![report.gap], evaluations: vec![report.evaluations as f64] })
    }

    /// Advances by `generations` and returns the new gap.
    pub fn step(&mut self, generations: u32) -> Result<f64, String> {
        for _ in 0..generations {
            let report = self.engine.step(&self.problem, &mut self.rng).map_err(message)?;
            self.gaps.push(report.gap);
            self.evaluations.push(report.evaluations as f64);
        }
        Ok(self.gap())
    }

    pub fn objectives(&self) -> Vec<f64> {
        flatten(&self.engine.objectives())
    }

    /// The hypervolume-optimal placement of μ points on the front.
    pub fn optimal(&self) -> Vec<f64> {
        optimal_mu_distribution(self.engine.config().mu).map(|p| flatten(&p)).unwrap_or_default()
    }

    pub fn gap(&self) -> f64 {
        hypervolume_gap(&self.engine.objectives(), self.engine.config().mu)
    }

    pub fn gap_history(&self) -> Vec<f64> {
        self.gaps.clone()
    }

    pub fn evaluation_history(&self) -> Vec<f64> {
        self.evaluations.clone()
    }

    pub fn evaluations(&self) -> f64 {
        self.engine.evaluations() as f64
    }

    /// Step sizes of the current population, best first.
    pub fn sigmas(&self) -> Vec<f64> {
        self.engine.population().iter().map(|i| i.strategy.sigma).collect()
    }

    pub fn problem_name(&self) -> String {
        self.problem.name().to_string()
    }
}

/// Runs the (1+1) strategy on a named function and returns
/// `[evaluations, fitness, ...]` sampled every `n` evaluations.
#[wasm_bindgen]
pub fn single_objective_trace(function: &str, n: usize, seed: u32, budget: u32, target: f64) -> Result<Vec<f64>, String> {
    let kind: SingleKind = function.parse().map_err(message)?;
    let problem = SingleObjectiveProblem::new(kind, n).map_err(message)?;
    let params = ElitistParams::new(n);
    let mut rng = seeded(seed.into());
    let f = |x: &[f64]| problem.eval(x).expect("dimension fixed above");
    let mut state = ElitistState::new(initial_point(n, &mut rng), 1.0, &params, f).map_err(message)?;
    let mut trace = vec![state.evaluations as f64, state.fitness];
    while state.evaluations < budget as u64 && state.fitness > target {
        match state.step(&params, f, &mut rng) {
            Ok(_) => {}
            Err(Error::Stagnation { .. }) => break,
            Err(e) => return Err(message(e)),
        }
        if state.evaluations % n as u64 == 0 {
            trace.extend([state.evaluations as f64, state.fitness]);
        }
    }
    if trace[trace.len() - 2] != state.evaluations as f64 {
        trace.extend([state.evaluations as f64, state.fitness]);
    }
    Ok(trace)
}

/// Dominated hypervolume of a point set with reference point (10, 10).
#[wasm_bindgen]
pub fn hypervolume(points: &[f64]) -> Result<f64, String> {
    Ok(hypervolume_2d(&unflatten(points)?, &REFERENCE_POINT))
}

/// Exclusive hypervolume contribution of every point.
#[wasm_bindgen]
pub fn contributions(points: &[f64]) -> Result<Vec<f64>, String> {
    Ok(hv_contributions_2d(&unflatten(points)?, &REFERENCE_POINT))
}

/// Non-dominance rank of every point (0 = non-dominated).
#[wasm_bindgen]
pub fn ranks(points: &[f64]) -> Result<Vec<u32>, String> {
    Ok(nondominated_sort(&unflatten(points)?).into_iter().map(|r| r as u32).collect())
}
