use serde::{Deserialize, Serialize};

use super::{
    check_finite, default_rank, elitist_step, DirectionSet, ModelDigest, OpCounts, Sample,
    StateSnapshot, StepOutcome, StepSizeRule, VariableMetric,
};
use crate::error::{check_len, Error, Result};
use crate::rng::{standard_normal_vec, Rng};

/// How the direction vectors enter the sampling transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// `d = z + Σ (m_iᵀz) m_i`. Each direction adds an eigenvalue near `1 + n`
    /// to the sampling covariance, which is far too elongated for sphere-like
    /// problems.
    Unit,
    /// `d = z + Σ c_{d,i} (m_iᵀz) m_i`, keeping the transform close to the
    /// identity until a direction is consistently reinforced.
    #[default]
    Damped,
}

/// Parameters of the (1+1)-LM-MA-ES.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElitistParams {
    pub n: usize,
    pub k: usize,
    pub step_size: StepSizeRule,
    pub sampling: Sampling,
    /// `1/(1.5^{i-1} n)`, the sampling weights under [`Sampling::Damped`].
    pub c_d: Vec<f64>,
    /// `k/(4^{i-1} n)`, capped at 1.
    pub c_c: Vec<f64>,
    /// `sqrt(c_c (2 - c_c))`.
    pub path_gain: Vec<f64>,
}

impl ElitistParams {
    pub fn new(n: usize) -> Self {
        Self::with_rank(n, default_rank(n))
    }

    pub fn with_rank(n: usize, k: usize) -> Self {
        let nf = n as f64;
        let c_d: Vec<f64> = (0..k).map(|i| (1.0 / (1.5f64.powi(i as i32) * nf)).min(1.0)).collect();
        let c_c: Vec<f64> =
            (0..k).map(|i| (k as f64 / (4f64.powi(i as i32) * nf)).min(1.0)).collect();
        let path_gain = c_c.iter().map(|c| (c * (2.0 - c)).sqrt()).collect();
        Self { n, k, step_size: StepSizeRule::one_fifth(n), sampling: Sampling::default(), c_d, c_c, path_gain }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }
}

/// One (1+1)-LM-MA-ES individual. `F` is the cached fitness of `x`: a scalar for
/// single-objective use, an objective vector inside the multi-objective engine.
#[derive(Debug, Clone, PartialEq)]
pub struct ElitistState<F = f64> {
    pub x: Vec<f64>,
    pub fitness: F,
    pub sigma: f64,
    pub directions: DirectionSet,
    pub evaluations: u64,
    pub ops: OpCounts,
}

impl<F: Clone> ElitistState<F> {
    /// State with a known fitness for `x` and zero direction vectors.
    pub fn with_fitness(x: Vec<f64>, fitness: F, sigma: f64, params: &ElitistParams) -> Result<Self> {
        check_len(params.n, x.len())?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::contract(format!("sigma must be positive and finite, got {sigma}")));
        }
        Ok(Self {
            x,
            fitness,
            sigma,
            directions: DirectionSet::zeros(params.k, params.n),
            evaluations: 0,
            ops: OpCounts::default(),
        })
    }
}

impl ElitistState<f64> {
    /// Evaluates `x` once to fill the fitness cache.
    pub fn new<G>(x: Vec<f64>, sigma: f64, params: &ElitistParams, mut objective: G) -> Result<Self>
    where
        G: FnMut(&[f64]) -> f64,
    {
        check_len(params.n, x.len())?;
        let fx = check_finite(objective(&x), 1)?;
        let mut state = Self::with_fitness(x, fx, sigma, params)?;
        state.evaluations = 1;
        Ok(state)
    }

    pub fn step<G>(&mut self, params: &ElitistParams, objective: G, rng: &mut Rng) -> Result<StepOutcome>
    where
        G: FnMut(&[f64]) -> f64,
    {
        elitist_step(self, params, objective, rng)
    }
}

impl<F: Clone> VariableMetric for ElitistState<F> {
    type Params = ElitistParams;
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

    fn sample(&mut self, params: &ElitistParams, rng: &mut Rng) -> Sample {
        let z = standard_normal_vec(rng, self.x.len());
        let weights = match params.sampling {
            Sampling::Unit => None,
            Sampling::Damped => Some(params.c_d.as_slice()),
        };
        let mut d = self.directions.expand_weighted(&z, weights, &mut self.ops.sample);
        for (di, xi) in d.iter_mut().zip(&self.x) {
            *di = xi + self.sigma * *di;
        }
        self.ops.sample += 2 * self.x.len() as u64;
        Sample { z, offspring: d }
    }

    fn adapt(&mut self, params: &ElitistParams, z: &[f64], success: bool) {
        if success {
            self.directions.accumulate(&params.c_c, &params.path_gain, z, &mut self.ops.update);
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
        StateSnapshot {
            x: self.x.clone(),
            sigma: self.sigma,
            evaluations: self.evaluations,
            model: ModelDigest::LowRank { direction_norms: self.directions.norms() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn params_formulas() {
        let p = ElitistParams::new(128);
        assert_eq!(p.k, 18);
        assert_eq!(p.c_c[0], 18.0 / 128.0);
        assert_eq!(p.c_c[2], 18.0 / (16.0 * 128.0));
        assert_eq!(p.c_d[1], 1.0 / (1.5 * 128.0));
        assert_eq!(p.step_size.success / -p.step_size.failure, 4.0);
        assert!(p.c_c.iter().all(|c| *c > 0.0 && *c <= 1.0));
        // small n: rates are capped at one
        let small = ElitistParams::new(8);
        assert_eq!(small.c_c[0], 1.0);
        assert_eq!(small.path_gain[0], 1.0);
    }

    #[test]
    fn sampling_weights_scale_direction_terms() {
        let n = 4;
        for sampling in [Sampling::Unit, Sampling::Damped] {
            let params = ElitistParams::with_rank(n, 1).with_sampling(sampling);
            let mut state = ElitistState::with_fitness(vec![0.0; n], 0.0, 1.0, &params).unwrap();
            state.directions.row_mut(0).copy_from_slice(&[1.0, 0.0, 2.0, 0.0]);
            let Sample { z, offspring } = state.sample(&params, &mut seeded(2));
            let w = if sampling == Sampling::Unit { 1.0 } else { 1.0 / n as f64 };
            let proj = z[0] + 2.0 * z[2];
            let expected = [z[0] + w * proj, z[1], z[2] + 2.0 * w * proj, z[3]];
            for (a, b) in offspring.iter().zip(expected) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_directions_sample_is_isotropic() {
        let params = ElitistParams::new(10);
        let mut s = ElitistState::new(vec![1.0; 10], 0.3, &params, sphere).unwrap();
        let sample = s.sample(&params, &mut seeded(1));
        let expected: Vec<f64> = s.x.iter().zip(&sample.z).map(|(x, z)| x + 0.3 * z).collect();
        assert_eq!(sample.offspring, expected);
    }

    #[test]
    fn ties_are_accepted() {
        let params = ElitistParams::new(6);
        let mut s = ElitistState::new(vec![0.5; 6], 1.0, &params, |_| 1.0).unwrap();
        let out = s.step(&params, |_| 1.0, &mut seeded(2)).unwrap();
        assert!(out.success);
        assert_eq!(s.x, out.offspring);
        assert_eq!(s.sigma, params.step_size.success.exp());
    }

    #[test]
    fn success_from_zero_directions_sets_scaled_z() {
        let params = ElitistParams::new(16);
        let mut s = ElitistState::new(vec![0.0; 16], 1.0, &params, |_| 5.0).unwrap();
        let out = s.step(&params, |_| 1.0, &mut seeded(3)).unwrap();
        assert!(out.success);
        for (i, row) in s.directions.rows().enumerate() {
            let g = (params.c_c[i] * (2.0 - params.c_c[i])).sqrt();
            for (m, z) in row.iter().zip(&out.z) {
                assert_eq!(*m, g * z);
            }
        }
    }

    #[test]
    fn external_updates() {
        let params = ElitistParams::new(16);
        let mut s = ElitistState::with_fitness(vec![0.0; 16], [0.0, 0.0], 1.0, &params).unwrap();
        let z: Vec<f64> = (0..16).map(|i| i as f64 - 7.5).collect();
        s.adapt(&params, &z, false);
        assert!(s.directions.is_zero());
        s.adapt(&params, &z, false);
        let two_failures = (2.0 * params.step_size.failure).exp();
        assert!((s.sigma - two_failures).abs() < 1e-15);
        let x_before = s.x.clone();
        s.adapt(&params, &z, true);
        assert_eq!(s.x, x_before);
        assert_eq!(s.directions.row(0)[15], params.path_gain[0] * 7.5);
    }

    #[test]
    fn failure_leaves_point_and_directions() {
        let params = ElitistParams::new(8);
        let mut s = ElitistState::new(vec![0.0; 8], 1.0, &params, |_| 0.0).unwrap();
        let out = s.step(&params, |_| 1.0, &mut seeded(4)).unwrap();
        assert!(!out.success);
        assert_eq!(s.x, vec![0.0; 8]);
        assert_eq!(s.fitness, 0.0);
        assert!(s.directions.is_zero());
        assert_eq!(s.sigma, params.step_size.failure.exp());
        assert_eq!(s.evaluations, 2);
    }

    #[test]
    fn non_finite_objective_aborts() {
        let params = ElitistParams::new(4);
        let mut s = ElitistState::new(vec![0.0; 4], 1.0, &params, |_| 0.0).unwrap();
        let before = s.clone();
        let err = s.step(&params, |_| f64::NAN, &mut seeded(0)).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
        assert_eq!(s.x, before.x);
        assert_eq!(s.sigma, before.sigma);
        assert!(ElitistState::new(vec![0.0; 4], 1.0, &params, |_| f64::INFINITY).is_err());
    }

    #[test]
    fn sigma_underflow_signals_stagnation() {
        let params = ElitistParams::new(4);
        let mut s = ElitistState::new(vec![0.0; 4], 1e-299, &params, |_| 0.0).unwrap();
        let mut rng = seeded(0);
        let err = (0..10_000)
            .find_map(|_| s.step(&params, |_| 1.0, &mut rng).err())
            .expect("sigma must underflow");
        assert!(matches!(err, Error::Stagnation { .. }));
    }

    #[test]
    fn converges_on_sphere() {
        let n = 20;
        let params = ElitistParams::new(n);
        let mut rng = seeded(9);
        let mut s = ElitistState::new(vec![1.0; n], 1.0, &params, sphere).unwrap();
        while s.evaluations < 500 * n as u64 && s.fitness > 1e-10 {
            s.step(&params, sphere, &mut rng).unwrap();
        }
        assert!(s.fitness <= 1e-10, "f = {}", s.fitness);
    }
}
