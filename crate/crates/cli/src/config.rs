use std::fmt;
use std::path::Path;
use std::str::FromStr;

use lmmaes::problems::{SingleKind, DEFAULT_CONDITION, PROBLEM_IDS};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Single,
    Multi,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Single => "single",
            Mode::Multi => "multi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Population-based LM-MA-ES.
    Lmma,
    /// (1+1)-LM-MA-ES.
    ElitistLmma,
    /// Multi-objective engine with low-rank individuals.
    MoLmma,
    /// Multi-objective engine with full-rank Cholesky individuals.
    MoFullrank,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lmma => "lmma",
            Algorithm::ElitistLmma => "elitist-lmma",
            Algorithm::MoLmma => "mo-lmma",
            Algorithm::MoFullrank => "mo-fullrank",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Algorithm::Lmma | Algorithm::ElitistLmma => Mode::Single,
            Algorithm::MoLmma | Algorithm::MoFullrank => Mode::Multi,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single-objective function by name or a bi-objective suite member by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ProblemRef {
    Single(SingleKind),
    Multi(u32),
}

impl ProblemRef {
    pub fn mode(self) -> Mode {
        match self {
            ProblemRef::Single(_) => Mode::Single,
            ProblemRef::Multi(_) => Mode::Multi,
        }
    }
}

impl fmt::Display for ProblemRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemRef::Single(k) => write!(f, "{k}"),
            ProblemRef::Multi(id) => write!(f, "{id}"),
        }
    }
}

impl FromStr for ProblemRef {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(id) = s.parse::<u32>() {
            if !PROBLEM_IDS.contains(&id) {
                return Err(CliError::usage(format!("problem id {id} outside 1..=9")));
            }
            return Ok(ProblemRef::Multi(id));
        }
        s.parse::<SingleKind>().map(ProblemRef::Single).map_err(|e| CliError::usage(e.to_string()))
    }
}

impl From<ProblemRef> for String {
    fn from(p: ProblemRef) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for ProblemRef {
    type Error = CliError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

/// Evaluation budget, either absolute or in multiples of `μ·n` (`n` in single mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Budget {
    Evaluations(u64),
    PerMuN(f64),
}

impl Budget {
    pub fn resolve(self, mu: usize, n: usize) -> u64 {
        match self {
            Budget::Evaluations(b) => b,
            Budget::PerMuN(per) => (per * (mu * n) as f64).round() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub algorithm: Algorithm,
    pub problem: ProblemRef,
    pub dimensions: Vec<usize>,
    /// Population size in multi mode; ignored in single mode.
    #[serde(default = "default_mu")]
    pub mu: usize,
    pub budget: Budget,
    /// Fitness target (single) or hypervolume-gap target (multi).
    pub target: f64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_condition")]
    pub condition: f64,
    /// Evaluations between log records. Defaults to `n` (single) or one generation (multi).
    #[serde(default)]
    pub log_every: Option<u64>,
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
}

fn default_mu() -> usize {
    10
}

fn default_repetitions() -> usize {
    5
}

fn default_condition() -> f64 {
    DEFAULT_CONDITION
}

fn default_sigma0() -> f64 {
    lmmaes::strategies::DEFAULT_SIGMA0
}

impl ExperimentConfig {
    /// Defaults for `problem`: the elitist strategy or the low-rank engine,
    /// `1000·μ·n` evaluations, target `1e-10` (single) or gap `1e-8` (multi).
    pub fn new(problem: ProblemRef, dimensions: Vec<usize>) -> Self {
        let mode = problem.mode();
        let (algorithm, target) = match mode {
            Mode::Single => (Algorithm::ElitistLmma, 1e-10),
            Mode::Multi => (Algorithm::MoLmma, 1e-8),
        };
        Self {
            mode,
            algorithm,
            problem,
            dimensions,
            mu: default_mu(),
            budget: Budget::PerMuN(1000.0),
            target,
            repetitions: default_repetitions(),
            seed: 0,
            condition: DEFAULT_CONDITION,
            log_every: None,
            sigma0: default_sigma0(),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// Population size used for budget normalization.
    pub fn effective_mu(&self) -> usize {
        match self.mode {
            Mode::Single => 1,
            Mode::Multi => self.mu,
        }
    }

    pub fn budget_for(&self, n: usize) -> u64 {
        self.budget.resolve(self.effective_mu(), n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithm.mode() != self.mode {
            return Err(CliError::usage(format!("algorithm {} cannot run in {} mode", self.algorithm, self.mode)));
        }
        if self.problem.mode() != self.mode {
            return Err(CliError::usage(format!("problem {} does not belong to {} mode", self.problem, self.mode)));
        }
        if self.dimensions.is_empty() {
            return Err(CliError::usage("at least one dimension is required"));
        }
        let min_n = if self.algorithm == Algorithm::Lmma { 4 } else { 2 };
        if let Some(&n) = self.dimensions.iter().find(|&&n| n < min_n) {
            return Err(CliError::usage(format!("dimension {n} below the minimum {min_n} for {}", self.algorithm)));
        }
        if self.mode == Mode::Multi && self.mu < 2 {
            return Err(CliError::usage("mu must be at least 2"));
        }
        if self.dimensions.iter().any(|&n| self.budget_for(n) < 1) {
            return Err(CliError::usage("budget must be at least one evaluation"));
        }
        if let Budget::PerMuN(per) = self.budget {
            if !(per > 0.0 && per.is_finite()) {
                return Err(CliError::usage("normalized budget must be positive"));
            }
        }
        if self.repetitions < 1 {
            return Err(CliError::usage("repetitions must be at least 1"));
        }
        if !self.target.is_finite() || self.target < 0.0 {
            return Err(CliError::usage("target must be finite and non-negative"));
        }
        if !(self.condition >= 1.0 && self.condition.is_finite()) {
            return Err(CliError::usage("condition must be a finite number >= 1"));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(CliError::usage("sigma0 must be positive"));
        }
        if self.log_every == Some(0) {
            return Err(CliError::usage("log cadence must be positive"));
        }
        Ok(())
    }
}
