use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::rng::{standard_normal, Rng};

const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Eigenbasis of a quadratic form.
#[derive(Debug, Clone, PartialEq)]
pub enum Rotation {
    Identity,
    /// Orthogonal matrix whose columns are the eigenvectors.
    Dense(DMatrix<f64>),
}

/// `H = Q diag(spectrum) Qᵀ`, with `spectrum[j]` the eigenvalue of column `j` of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    rotation: Rotation,
    spectrum: Vec<f64>,
}

impl QuadraticForm {
    pub fn aligned(spectrum: Vec<f64>) -> Result<Self> {
        check_spectrum(&spectrum)?;
        Ok(Self { rotation: Rotation::Identity, spectrum })
    }

    /// Fails unless `q` is orthogonal to within 1e-10 and matches the spectrum length.
    pub fn rotated(q: DMatrix<f64>, spectrum: Vec<f64>) -> Result<Self> {
        check_spectrum(&spectrum)?;
        let n = spectrum.len();
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: q.nrows() });
        }
        let defect = (&q * q.transpose() - DMatrix::<f64>::identity(n, n)).amax();
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::contract(format!(
                "rotation is not orthogonal (max |QQᵀ - I| = {defect:e})"
            )));
        }
        Ok(Self { rotation: Rotation::Dense(q), spectrum })
    }

    pub fn dimension(&self) -> usize {
        self.spectrum.len()
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rotation
    }

    /// `vᵀ H v`.
    pub fn quad(&self, v: &[f64]) -> f64 {
        match &self.rotation {
            Rotation::Identity => self.spectrum.iter().zip(v).map(|(l, x)| l * x * x).sum(),
            Rotation::Dense(q) => {
                let n = v.len();
                let mut acc = 0.0;
                for j in 0..n {
                    let col = q.column(j);
                    let mut t = 0.0;
                    for i in 0..n {
                        t += col[i] * v[i];
                    }
                    acc += self.spectrum[j] * t * t;
                }
                acc
            }
        }
    }

    /// `H v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        match &self.rotation {
            Rotation::Identity => self.spectrum.iter().zip(v).map(|(l, x)| l * x).collect(),
            Rotation::Dense(q) => {
                let v = DVector::from_column_slice(v);
                let mut t = q.tr_mul(&v);
                for (tj, l) in t.iter_mut().zip(&self.spectrum) {
                    *tj *= l;
                }
                (q * t).as_slice().to_vec()
            }
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.spectrum));
        match &self.rotation {
            Rotation::Identity => lambda,
            Rotation::Dense(q) => q * lambda * q.transpose(),
        }
    }

    pub(crate) fn check_dimension(&self, v: &[f64]) -> Result<()> {
        check_len(self.dimension(), v.len())
    }
}

fn check_spectrum(spectrum: &[f64]) -> Result<()> {
    if spectrum.is_empty() {
        return Err(Error::contract("empty spectrum"));
    }
    if let Some(bad) = spectrum.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::contract(format!("eigenvalue {bad} is not positive and finite")));
    }
    Ok(())
}

/// `λ_j = κ^{(j-1)/(n-1)}` for `j = 1..n`; ascending from 1 to κ.
pub fn log_uniform_spectrum(n: usize, condition: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|j| match j {
            0 => 1.0,
            j if j == n - 1 => condition,
            j => condition.powf(j as f64 / (n - 1) as f64),
        })
        .collect()
}

/// Orthonormalized standard-normal matrix, with column signs fixed so the
/// triangular factor has a positive diagonal.
pub fn random_rotation(n: usize, rng: &mut Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| standard_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
