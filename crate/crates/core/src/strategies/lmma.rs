use serde::{Deserialize, Serialize};

use super::{check_finite, check_sigma, default_rank, DirectionSet, ModelDigest, StateSnapshot};
use crate::error::{check_len, Error, Result};
use crate::rng::{standard_normal_vec, Rng};

/// Log-linear weights `(ln(μ + ½) - ln i) / Σ_j (ln(μ + ½) - ln j)`.
pub fn recombination_weights(mu: usize) -> Vec<f64> {
    let top = (mu as f64 + 0.5).ln();
    let raw: Vec<f64> = (1..=mu).map(|i| top - (i as f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Parameters of the population-based LM-MA-ES. Rates are capped at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmmaParams {
    pub n: usize,
    pub lambda: usize,
    pub mu: usize,
    pub weights: Vec<f64>,
    pub mu_w: f64,
    pub k: usize,
    pub c_sigma: f64,
    pub c_d: Vec<f64>,
    pub c_c: Vec<f64>,
}

impl LmmaParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::contract(format!("LM-MA-ES needs n >= 4, got {n}")));
        }
        let nf = n as f64;
        let lambda = default_rank(n);
        let mu = lambda / 2;
        let weights = recombination_weights(mu);
        let mu_w = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let k = default_rank(n);
        let c_sigma = (2.0 * lambda as f64 / nf).min(1.0);
        let c_d = (0..k).map(|i| (1.0 / (1.5f64.powi(i as i32) * nf)).min(1.0)).collect();
        let c_c = (0..k).map(|i| (lambda as f64 / (4f64.powi(i as i32) * nf)).min(1.0)).collect();
        Ok(Self { n, lambda, mu, weights, mu_w, k, c_sigma, c_d, c_c })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmmaState {
    pub x: Vec<f64>,
    pub sigma: f64,
    pub p_sigma: Vec<f64>,
    pub directions: DirectionSet,
    pub generation: u64,
    pub evaluations: u64,
    pub sample_ops: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationSummary {
    /// Best fitness among this generation's samples.
    pub best_fitness: f64,
    pub evaluations: u64,
}

impl LmmaState {
    pub fn new(x: Vec<f64>, sigma: f64, params: &LmmaParams) -> Result<Self> {
        check_len(params.n, x.len())?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::contract(format!("sigma must be positive and finite, got {sigma}")));
        }
        let n = params.n;
        Ok(Self {
            x,
            sigma,
            p_sigma: vec![0.0; n],
            directions: DirectionSet::zeros(params.k, n),
            generation: 0,
            evaluations: 0,
            sample_ops: 0,
        })
    }

    /// One generation: λ samples, weighted recombination of the best μ,
    /// cumulative step-size adaptation and direction-vector updates.
    ///
    /// Samples of equal fitness keep their sampling order. On a non-finite
    /// objective value the state is left unchanged.
    pub fn step<F>(&mut self, params: &LmmaParams, mut objective: F, rng: &mut Rng) -> Result<GenerationSummary>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = params.n;
        let mut ops = self.sample_ops;
        let mut zs = Vec::with_capacity(params.lambda);
        let mut ds = Vec::with_capacity(params.lambda);
        let mut fs = Vec::with_capacity(params.lambda);
        let mut y = vec![0.0; n];
        for i in 0..params.lambda {
            let z = standard_normal_vec(rng, n);
            let d = self.directions.chain(&z, &params.c_d, &mut ops);
            for ((yi, xi), di) in y.iter_mut().zip(&self.x).zip(&d) {
                *yi = xi + self.sigma * di;
            }
            let f = check_finite(objective(&y), self.evaluations + i as u64 + 1)?;
            zs.push(z);
            ds.push(d);
            fs.push(f);
        }

        let mut order: Vec<usize> = (0..params.lambda).collect();
        order.sort_by(|&a, &b| fs[a].total_cmp(&fs[b]));

        let mut step_d = vec![0.0; n];
        let mut step_z = vec![0.0; n];
        for (w, &idx) in params.weights.iter().zip(&order) {
            for j in 0..n {
                step_d[j] += w * ds[idx][j];
                step_z[j] += w * zs[idx][j];
            }
        }
        for (xi, di) in self.x.iter_mut().zip(&step_d) {
            *xi += self.sigma * di;
        }

        let cs = params.c_sigma;
        let gain = (params.mu_w * cs * (2.0 - cs)).sqrt();
        for (p, z) in self.p_sigma.iter_mut().zip(&step_z) {
            *p = (1.0 - cs) * *p + gain * z;
        }

        let gains: Vec<f64> =
            params.c_c.iter().map(|c| (params.mu_w * c * (2.0 - c)).sqrt()).collect();
        let mut update_ops = 0;
        self.directions.accumulate(&params.c_c, &gains, &step_z, &mut update_ops);

        let norm2: f64 = self.p_sigma.iter().map(|v| v * v).sum();
        self.sigma *= (cs / 2.0 * (norm2 / n as f64 - 1.0)).exp();

        self.generation += 1;
        self.evaluations += params.lambda as u64;
        self.sample_ops = ops;
        check_sigma(self.sigma, self.evaluations)?;
        Ok(GenerationSummary { best_fitness: fs[order[0]], evaluations: self.evaluations })
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            x: self.x.clone(),
            sigma: self.sigma,
            evaluations: self.evaluations,
            model: ModelDigest::LowRank { direction_norms: self.directions.norms() },
        }
    }
}
