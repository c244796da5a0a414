use serde::{Deserialize, Serialize};

use super::{
    check_finite, elitist_step, ModelDigest, OpCounts, Sample, StateSnapshot, StepOutcome,
    StepSizeRule, VariableMetric,
};
use crate::error::{check_len, Error, Result};
use crate::rng::{standard_normal_vec, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CholeskyParams {
    pub n: usize,
    /// Covariance learning rate, `2/(n² + 6)` by default.
    pub c_cov: f64,
    pub step_size: StepSizeRule,
}

impl CholeskyParams {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        Self { n, c_cov: 2.0 / (nf * nf + 6.0), step_size: StepSizeRule::one_fifth(n) }
    }
}

/// Full-rank (1+1) individual sampling `x + σ A z`, so that `C = A Aᵀ`.
///
/// `A` starts as the identity and is kept dense: the rank-one factor update
/// adds `(A z) zᵀ`, which does not preserve triangularity.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyState<F = f64> {
    pub x: Vec<f64>,
    pub fitness: F,
    pub sigma: f64,
    /// Row-major `n × n`.
    pub a: Vec<f64>,
    pub evaluations: u64,
    pub ops: OpCounts,
}

impl<F: Clone> CholeskyState<F> {
    pub fn with_fitness(x: Vec<f64>, fitness: F, sigma: f64, params: &CholeskyParams) -> Result<Self> {
        check_len(params.n, x.len())?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::contract(format!("sigma must be positive and finite, got {sigma}")));
        }
        let n = x.len();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Ok(Self { x, fitness, sigma, a, evaluations: 0, ops: OpCounts::default() })
    }

    /// `A v`.
    fn transform(&self, v: &[f64], ops: &mut u64) -> Vec<f64> {
        let n = v.len();
        *ops += 2 * (n * n) as u64;
        self.a.chunks_exact(n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `C = A Aᵀ`, row-major.
    pub fn covariance(&self) -> Vec<f64> {
        let n = self.x.len();
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = (0..n).map(|l| self.a[i * n + l] * self.a[j * n + l]).sum();
            }
        }
        c
    }
}

impl CholeskyState<f64> {
    pub fn new<G>(x: Vec<f64>, sigma: f64, params: &CholeskyParams, mut objective: G) -> Result<Self>
    where
        G: FnMut(&[f64]) -> f64,
    {
        check_len(params.n, x.len())?;
        let fx = check_finite(objective(&x), 1)?;
        let mut state = Self::with_fitness(x, fx, sigma, params)?;
        state.evaluations = 1;
        Ok(state)
    }

    pub fn step<G>(&mut self, params: &CholeskyParams, objective: G, rng: &mut Rng) -> Result<StepOutcome>
    where
        G: FnMut(&[f64]) -> f64,
    {
        elitist_step(self, params, objective, rng)
    }
}

impl<F: Clone> VariableMetric for CholeskyState<F> {
    type Params = CholeskyParams;
    type Fitness = F;

    fn dimension(&self) -> usize {
        self.x.len()
    }

    fn x(&self) -> &[f64] {
        &self.x
    }

    fn fitness(&self) -> &F {
        &self.fitness
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn ops(&self) -> OpCounts {
        self.ops
    }

    fn evaluations(&self) -> u64 {
        self.evaluations
    }

    fn sample(&mut self, _params: &CholeskyParams, rng: &mut Rng) -> Sample {
        let z = standard_normal_vec(rng, self.x.len());
        let mut ops = self.ops.sample;
        let mut y = self.transform(&z, &mut ops);
        for (yi, xi) in y.iter_mut().zip(&self.x) {
            *yi = xi + self.sigma * *yi;
        }
        self.ops.sample = ops + 2 * self.x.len() as u64;
        Sample { z, offspring: y }
    }

    fn adapt(&mut self, params: &CholeskyParams, z: &[f64], success: bool) {
        if success {
            let c = params.c_cov;
            let zz: f64 = z.iter().map(|v| v * v).sum();
            if zz > 0.0 {
                let mut ops = self.ops.update;
                let az = self.transform(z, &mut ops);
                let alpha = (1.0 - c).sqrt();
                let beta = alpha / zz * ((1.0 + c * zz / (1.0 - c)).sqrt() - 1.0);
                let n = z.len();
                for (row, azi) in self.a.chunks_exact_mut(n).zip(&az) {
                    let s = beta * azi;
                    for (aij, zj) in row.iter_mut().zip(z) {
                        *aij = alpha * *aij + s * zj;
                    }
                }
                self.ops.update = ops + 3 * (n * n) as u64;
            }
        }
        self.sigma *= params.step_size.factor(success);
    }

    fn relocate(&mut self, x: Vec<f64>, fitness: F) {
        self.x = x;
        self.fitness = fitness;
    }

    fn record_evaluations(&mut self, count: u64) {
        self.evaluations += count;
    }

    fn snapshot(&self) -> StateSnapshot {
        let n = self.x.len();
        StateSnapshot {
            x: self.x.clone(),
            sigma: self.sigma,
            evaluations: self.evaluations,
            model: ModelDigest::FullRank {
                frobenius: self.a.iter().map(|v| v * v).sum::<f64>().sqrt(),
                trace: (0..n).map(|i| self.a[i * n + i]).sum(),
            },
        }
    }
}
