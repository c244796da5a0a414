use std::time::Instant;

use lmmaes::moea::{EngineConfig, GenerationReport, IndividualKind, MoEngine, Objectives};
use lmmaes::problems::{make_biobjective, BiObjectiveProblem, SingleObjectiveProblem};
use lmmaes::rng::seeded;
use lmmaes::strategies::{
    initial_point, ElitistParams, ElitistState, LmmaParams, LmmaState, Sampling, VariableMetric,
};
use lmmaes::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, ExperimentConfig, ProblemRef};
use crate::error::{CliError, Result};
use crate::records::{LogHeader, ProblemHeader, RecordSink, RunRecord, StrategyHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Target,
    Budget,
    Stagnation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub run: usize,
    pub seed: u64,
    pub n: usize,
    pub stop: StopReason,
    pub records: Vec<RunRecord>,
}

impl RunOutcome {
    pub fn last(&self) -> &RunRecord {
        self.records.last().expect("every run logs a final record")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Measure wall time instead of writing zeros.
    pub timing: bool,
    /// Worker threads for repetitions; 0 or 1 runs them in order on the calling thread.
    pub jobs: usize,
}

/// Header describing the stream for dimension `n`.
pub fn header_for(config: &ExperimentConfig, n: usize) -> Result<LogHeader> {
    let problem = match config.problem {
        ProblemRef::Single(kind) => ProblemHeader::Single { problem: SingleObjectiveProblem::new(kind, n)? },
        ProblemRef::Multi(id) => {
            ProblemHeader::Multi { descriptor: make_biobjective(id, n, config.condition, config.seed)?.descriptor() }
        }
    };
    let sampling = match config.algorithm {
        Algorithm::ElitistLmma | Algorithm::MoLmma => Some(Sampling::default()),
        Algorithm::Lmma | Algorithm::MoFullrank => None,
    };
    Ok(LogHeader {
        config: config.clone(),
        dimension: n,
        problem,
        strategy: StrategyHeader { initial_point: "standard-normal".into(), sigma0: config.sigma0, sampling },
    })
}

/// Runs every repetition for every dimension. Streams go to `sink` ordered by
/// dimension and then by run id, independent of `options.jobs`.
///
/// Aborted runs keep the records they produced; the first abort is returned
/// after all other runs have finished.
pub fn run_experiment(config: &ExperimentConfig, options: RunOptions, sink: &mut dyn RecordSink) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    let mut outcomes = Vec::new();
    let mut first_abort = None;
    for &n in &config.dimensions {
        sink.begin(&header_for(config, n)?)?;
        let mut results = Vec::with_capacity(config.repetitions);
        if options.jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(options.jobs)
                .build()
                .map_err(|e| CliError::usage(format!("cannot start worker threads: {e}")))?;
            let batch: Vec<_> = pool.install(|| {
                (0..config.repetitions)
                    .into_par_iter()
                    .map(|r| {
                        let mut records = Vec::new();
                        let res = run_one(config, n, r, options.timing, &mut |rec| records.push(rec.clone()));
                        (res, records)
                    })
                    .collect()
            });
            for (res, records) in batch {
                for rec in &records {
                    sink.record(rec)?;
                }
                results.push(res);
            }
        } else {
            for r in 0..config.repetitions {
                let mut pending = Ok(());
                let res = run_one(config, n, r, options.timing, &mut |rec| {
                    if pending.is_ok() {
                        pending = sink.record(rec);
                    }
                });
                pending?;
                results.push(res);
            }
        }
        for res in results {
            match res {
                Ok(outcome) => outcomes.push(outcome),
                Err(e @ CliError::Aborted { .. }) => {
                    first_abort.get_or_insert(e);
                }
                Err(e) => return Err(e),
            }
        }
        sink.finish()?;
    }
    match first_abort {
        Some(e) => Err(e),
        None => Ok(outcomes),
    }
}

/// Log-cadence bookkeeping shared by both modes.
struct Logger<'a> {
    run: usize,
    seed: u64,
    every: u64,
    next: u64,
    start: Option<Instant>,
    records: Vec<RunRecord>,
    emit: &'a mut dyn FnMut(&RunRecord),
}

impl<'a> Logger<'a> {
    fn new(run: usize, seed: u64, every: u64, timing: bool, emit: &'a mut dyn FnMut(&RunRecord)) -> Self {
        Self { run, seed, every, next: 0, start: timing.then(Instant::now), records: Vec::new(), emit }
    }

    fn push(&mut self, evaluations: u64, quality: f64, gap: Option<f64>) {
        if self.records.last().is_some_and(|r| r.evaluations >= evaluations) {
            return;
        }
        let wall_ms = self.start.map_or(0, |t| t.elapsed().as_millis() as u64);
        let record = RunRecord { run: self.run, seed: self.seed, evaluations, quality, gap, wall_ms };
        (self.emit)(&record);
        self.records.push(record);
        self.next = (evaluations / self.every + 1) * self.every;
    }

    /// Records when a cadence tick has been crossed.
    fn tick(&mut self, evaluations: u64, quality: f64, gap: Option<f64>) {
        if evaluations >= self.next {
            self.push(evaluations, quality, gap);
        }
    }

    fn abort(&self, n: usize, source: Error) -> CliError {
        CliError::Aborted { run: self.run, seed: self.seed, n, source }
    }
}

/// Runs repetition `run` in dimension `n`, passing each record to `emit` as it is produced.
pub fn run_one(
    config: &ExperimentConfig,
    n: usize,
    run: usize,
    timing: bool,
    emit: &mut dyn FnMut(&RunRecord),
) -> Result<RunOutcome> {
    let seed = config.seed.wrapping_add(run as u64);
    let budget = config.budget_for(n);
    let (stop, records) = match config.problem {
        ProblemRef::Single(kind) => {
            let problem = SingleObjectiveProblem::new(kind, n)?;
            let every = config.log_every.unwrap_or(n as u64);
            let mut log = Logger::new(run, seed, every, timing, emit);
            let stop = match config.algorithm {
                Algorithm::ElitistLmma => run_elitist(config, &problem, seed, budget, &mut log),
                Algorithm::Lmma => run_lmma(config, &problem, seed, budget, &mut log),
                other => return Err(CliError::usage(format!("{other} is not a single-objective algorithm"))),
            }
            .map_err(|e| log.abort(n, e))?;
            (stop, log.records)
        }
        ProblemRef::Multi(id) => {
            let problem = make_biobjective(id, n, config.condition, config.seed)?;
            let mut rng = seeded(seed);
            let kind = match config.algorithm {
                Algorithm::MoLmma => IndividualKind::LowRank,
                Algorithm::MoFullrank => IndividualKind::FullRank,
                other => return Err(CliError::usage(format!("{other} is not a multi-objective algorithm"))),
            };
            let engine_config = EngineConfig::new(config.mu, kind);
            let every = config.log_every.unwrap_or(config.mu as u64);
            let mut log = Logger::new(run, seed, every, timing, emit);
            let stop = match kind {
                IndividualKind::LowRank => {
                    let engine = MoEngine::low_rank(&problem, engine_config, config.sigma0, &mut rng)?;
                    run_engine(engine, &problem, config, budget, &mut rng, &mut log)
                }
                IndividualKind::FullRank => {
                    let engine = MoEngine::full_rank(&problem, engine_config, config.sigma0, &mut rng)?;
                    run_engine(engine, &problem, config, budget, &mut rng, &mut log)
                }
            }
            .map_err(|e| log.abort(n, e))?;
            (stop, log.records)
        }
    };
    Ok(RunOutcome { run, seed, n, stop, records })
}

fn run_elitist(
    config: &ExperimentConfig,
    problem: &SingleObjectiveProblem,
    seed: u64,
    budget: u64,
    log: &mut Logger<'_>,
) -> lmmaes::Result<StopReason> {
    let n = problem.dimension;
    let mut rng = seeded(seed);
    let params = ElitistParams::new(n);
    let f = |x: &[f64]| problem.eval(x).expect("dimension checked at construction");
    let mut state = ElitistState::new(initial_point(n, &mut rng), config.sigma0, &params, f)?;
    log.push(state.evaluations, state.fitness, None);
    let stop = loop {
        if state.fitness <= config.target {
            break StopReason::Target;
        }
        if state.evaluations >= budget {
            break StopReason::Budget;
        }
        match state.step(&params, f, &mut rng) {
            Ok(_) => {}
            Err(Error::Stagnation { .. }) => break StopReason::Stagnation,
            Err(e) => return Err(e),
        }
        log.tick(state.evaluations, state.fitness, None);
    };
    log.push(state.evaluations, state.fitness, None);
    Ok(stop)
}

fn run_lmma(
    config: &ExperimentConfig,
    problem: &SingleObjectiveProblem,
    seed: u64,
    budget: u64,
    log: &mut Logger<'_>,
) -> lmmaes::Result<StopReason> {
    let n = problem.dimension;
    let mut rng = seeded(seed);
    let params = LmmaParams::new(n)?;
    let f = |x: &[f64]| problem.eval(x).expect("dimension checked at construction");
    let x0 = initial_point(n, &mut rng);
    let mut best = f(&x0);
    if !best.is_finite() {
        return Err(Error::NonFinite { value: best, evaluations: 1 });
    }
    let mut state = LmmaState::new(x0, config.sigma0, &params)?;
    // the initial point costs one evaluation on top of the generations
    let offset = 1;
    log.push(offset, best, None);
    let stop = loop {
        if best <= config.target {
            break StopReason::Target;
        }
        if state.evaluations + offset + params.lambda as u64 > budget {
            break StopReason::Budget;
        }
        match state.step(&params, f, &mut rng) {
            Ok(summary) => best = best.min(summary.best_fitness),
            Err(Error::Stagnation { .. }) => break StopReason::Stagnation,
            Err(e) => return Err(e),
        }
        log.tick(state.evaluations + offset, best, None);
    };
    log.push(state.evaluations + offset, best, None);
    Ok(stop)
}

fn run_engine<S: VariableMetric<Fitness = Objectives>>(
    mut engine: MoEngine<S>,
    problem: &BiObjectiveProblem,
    config: &ExperimentConfig,
    budget: u64,
    rng: &mut lmmaes::Rng,
    log: &mut Logger<'_>,
) -> lmmaes::Result<StopReason> {
    let emit = |r: &GenerationReport, log: &mut Logger<'_>, force: bool| {
        if force {
            log.push(r.evaluations, r.hypervolume, Some(r.gap));
        } else {
            log.tick(r.evaluations, r.hypervolume, Some(r.gap));
        }
    };
    let start = engine.report();
    emit(&start, log, true);
    let per_generation = engine.evaluations_per_generation();
    let mut last = start;
    let stop = loop {
        if last.gap <= config.target {
            break StopReason::Target;
        }
        if last.evaluations + per_generation > budget {
            break StopReason::Budget;
        }
        if last.max_sigma < lmmaes::strategies::SIGMA_FLOOR {
            break StopReason::Stagnation;
        }
        match engine.step(problem, rng) {
            Ok(r) => last = r,
            Err(Error::Stagnation { .. }) => break StopReason::Stagnation,
            Err(e) => return Err(e),
        }
        emit(&last, log, false);
    };
    emit(&last, log, true);
    Ok(stop)
}
