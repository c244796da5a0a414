use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{hypervolume_2d, select_survivors, Objectives};
use crate::error::{Error, Result};
use crate::metrics::hypervolume_gap;
use crate::problems::{BiObjectiveProblem, REFERENCE_POINT};
use crate::rng::Rng;
use crate::strategies::{
    initial_point, CholeskyParams, CholeskyState, ElitistParams, ElitistState, VariableMetric,
    SIGMA_FLOOR,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Every parent creates one offspring; the best μ of 2μ survive.
    PlusPlus,
    /// One uniformly chosen parent creates one offspring; the worst of μ+1 is removed.
    SteadyState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndividualKind {
    LowRank,
    FullRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub mu: usize,
    pub scheme: Scheme,
    pub reference_point: Objectives,
    pub kind: IndividualKind,
}

impl EngineConfig {
    pub fn new(mu: usize, kind: IndividualKind) -> Self {
        Self { mu, scheme: Scheme::PlusPlus, reference_point: REFERENCE_POINT, kind }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual<S> {
    pub strategy: S,
    pub id: u64,
}

impl<S: VariableMetric<Fitness = Objectives>> Individual<S> {
    pub fn objectives(&self) -> Objectives {
        *self.strategy.fitness()
    }
}

/// Per-generation log entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationReport {
    pub generation: u64,
    pub evaluations: u64,
    pub hypervolume: f64,
    /// Unclamped hypervolume gap with respect to the optimal μ-distribution.
    pub gap: f64,
    pub max_sigma: f64,
}

/// Population of elitist strategies under indicator-based environmental selection.
///
/// The engine is generic in the individual type: low-rank and full-rank
/// populations share everything except sampling and model adaptation.
#[derive(Debug, Clone)]
pub struct MoEngine<S: VariableMetric<Fitness = Objectives>> {
    population: Vec<Individual<S>>,
    params: S::Params,
    config: EngineConfig,
    next_id: u64,
    evaluations: u64,
    generation: u64,
}

fn evaluate(problem: &BiObjectiveProblem, x: &[f64], evaluations: u64) -> Result<Objectives> {
    let f = problem.eval(x)?;
    match f.iter().find(|v| !v.is_finite()) {
        Some(&value) => Err(Error::NonFinite { value, evaluations }),
        None => Ok(f),
    }
}

impl MoEngine<ElitistState<Objectives>> {
    /// MO-LM-MA-ES with default parameters, `x_0 ~ N(0, I)` and `σ_0 = sigma0`.
    pub fn low_rank(problem: &BiObjectiveProblem, config: EngineConfig, sigma0: f64, rng: &mut Rng) -> Result<Self> {
        let params = ElitistParams::new(problem.dimension());
        Self::initialize(problem, config, params, rng, |x, f, p| ElitistState::with_fitness(x, f, sigma0, p))
    }
}

impl MoEngine<CholeskyState<Objectives>> {
    /// Full-rank baseline with default parameters.
    pub fn full_rank(problem: &BiObjectiveProblem, config: EngineConfig, sigma0: f64, rng: &mut Rng) -> Result<Self> {
        let params = CholeskyParams::new(problem.dimension());
        Self::initialize(problem, config, params, rng, |x, f, p| CholeskyState::with_fitness(x, f, sigma0, p))
    }
}

impl<S: VariableMetric<Fitness = Objectives>> MoEngine<S> {
    /// Samples μ standard-normal starting points and builds one individual per point.
    pub fn initialize<B>(
        problem: &BiObjectiveProblem,
        config: EngineConfig,
        params: S::Params,
        rng: &mut Rng,
        mut build: B,
    ) -> Result<Self>
    where
        B: FnMut(Vec<f64>, Objectives, &S::Params) -> Result<S>,
    {
        if config.mu < 2 {
            return Err(Error::contract(format!("population size must be at least 2, got {}", config.mu)));
        }
        let mut population = Vec::with_capacity(config.mu);
        for id in 0..config.mu as u64 {
            let x = initial_point(problem.dimension(), rng);
            let f = evaluate(problem, &x, id + 1)?;
            let mut strategy = build(x, f, &params)?;
            strategy.record_evaluations(1);
            population.push(Individual { strategy, id });
        }
        Ok(Self::from_population(population, params, config))
    }

    /// Wraps an evaluated population. Evaluations already recorded by the
    /// strategies count toward the engine total.
    pub fn from_population(population: Vec<Individual<S>>, params: S::Params, config: EngineConfig) -> Self {
        let next_id = population.iter().map(|i| i.id + 1).max().unwrap_or(0);
        let evaluations = population.iter().map(|i| i.strategy.evaluations()).sum();
        Self { population, params, config, next_id, evaluations, generation: 0 }
    }

    pub fn population(&self) -> &[Individual<S>] {
        &self.population
    }

    pub fn params(&self) -> &S::Params {
        &self.params
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn objectives(&self) -> Vec<Objectives> {
        self.population.iter().map(Individual::objectives).collect()
    }

    /// Evaluations spent by one call to [`MoEngine::step`].
    pub fn evaluations_per_generation(&self) -> u64 {
        match self.config.scheme {
            Scheme::PlusPlus => self.config.mu as u64,
            Scheme::SteadyState => 1,
        }
    }

    pub fn report(&self) -> GenerationReport {
        let objs = self.objectives();
        GenerationReport {
            generation: self.generation,
            evaluations: self.evaluations,
            hypervolume: hypervolume_2d(&objs, &self.config.reference_point),
            gap: hypervolume_gap(&objs, self.config.mu),
            max_sigma: self.population.iter().map(|i| i.strategy.sigma()).fold(0.0, f64::max),
        }
    }

    /// One generation of variation, ranking, adaptation and selection.
    ///
    /// If an evaluation fails the population is left untouched.
    pub fn step(&mut self, problem: &BiObjectiveProblem, rng: &mut Rng) -> Result<GenerationReport> {
        let mu = self.config.mu;
        let parents: Vec<usize> = match self.config.scheme {
            Scheme::PlusPlus => (0..mu).collect(),
            Scheme::SteadyState => vec![rng.random_range(0..mu)],
        };

        let mut offspring = Vec::with_capacity(parents.len());
        let mut draws = Vec::with_capacity(parents.len());
        for (j, &p) in parents.iter().enumerate() {
            let mut child = self.population[p].strategy.clone();
            let sample = child.sample(&self.params, rng);
            let f = evaluate(problem, &sample.offspring, self.evaluations + j as u64 + 1)?;
            child.relocate(sample.offspring, f);
            child.record_evaluations(1);
            offspring.push(Individual { strategy: child, id: self.next_id + j as u64 });
            draws.push(sample.z);
        }
        self.next_id += offspring.len() as u64;
        self.evaluations += offspring.len() as u64;

        let offspring_base = self.population.len();
        let mut all = std::mem::take(&mut self.population);
        all.extend(offspring);
        let points: Vec<Objectives> = all.iter().map(Individual::objectives).collect();
        let ids: Vec<u64> = all.iter().map(|i| i.id).collect();
        let survivors = select_survivors(&points, &ids, &self.config.reference_point, mu);
        let mut selected = vec![false; all.len()];
        for &i in &survivors {
            selected[i] = true;
        }

        for (j, (&p, z)) in parents.iter().zip(&draws).enumerate() {
            let child = offspring_base + j;
            let success = selected[child];
            all[p].strategy.adapt(&self.params, z, success);
            all[child].strategy.adapt(&self.params, z, success);
        }

        let mut slots: Vec<Option<Individual<S>>> = all.into_iter().map(Some).collect();
        self.population = survivors.iter().map(|&i| slots[i].take().expect("selected once")).collect();
        self.generation += 1;
        Ok(self.report())
    }

    /// Steps until the evaluation budget would be exceeded, the gap reaches
    /// `target_gap`, or every step size has collapsed. `on_generation` sees each
    /// report; the last report is returned.
    pub fn run<F>(
        &mut self,
        problem: &BiObjectiveProblem,
        rng: &mut Rng,
        budget: u64,
        target_gap: f64,
        mut on_generation: F,
    ) -> Result<GenerationReport>
    where
        F: FnMut(&GenerationReport),
    {
        let mut report = self.report();
        while report.gap > target_gap
            && report.max_sigma >= SIGMA_FLOOR
            && self.evaluations + self.evaluations_per_generation() <= budget
        {
            report = self.step(problem, rng)?;
            on_generation(&report);
        }
        Ok(report)
    }
}
