use super::{axpy, dot};

/// The direction vectors `m_1..m_k` of the covariance model `I + Σ m_i m_iᵀ`,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    k: usize,
    n: usize,
    rows: Vec<f64>,
}

impl DirectionSet {
    pub fn zeros(k: usize, n: usize) -> Self {
        Self { k, n, rows: vec![0.0; k * n] }
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.chunks_exact(self.n.max(1)).take(self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|v| *v == 0.0)
    }

    pub fn norms(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).collect()
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.rows[i * self.n..(i + 1) * self.n]
    }

    /// `z + Σ w_i (m_iᵀz) m_i`, computed as `z + Mᵀ(W M z)`. Unit weights when
    /// `weights` is `None`.
    pub(crate) fn expand_weighted(&self, z: &[f64], weights: Option<&[f64]>, ops: &mut u64) -> Vec<f64> {
        let mut coeffs: Vec<f64> = self.rows().map(|m| dot(m, z, ops)).collect();
        if let Some(w) = weights {
            for (c, w) in coeffs.iter_mut().zip(w) {
                *c *= w;
            }
            *ops += self.k as u64;
        }
        let mut d = z.to_vec();
        for (m, c) in self.rows().zip(coeffs) {
            axpy(c, m, &mut d, ops);
        }
        d
    }

    /// The sequential chain `d ← (1 - c_j) d + c_j m_j (m_jᵀ d)` for `j = 1..k`.
    pub(crate) fn chain(&self, z: &[f64], rates: &[f64], ops: &mut u64) -> Vec<f64> {
        let mut d = z.to_vec();
        for (m, &c) in self.rows().zip(rates) {
            let proj = dot(m, &d, ops);
            for (di, mi) in d.iter_mut().zip(m) {
                *di = (1.0 - c) * *di + c * mi * proj;
            }
            *ops += 4 * self.n as u64;
        }
        d
    }

    /// `m_i ← (1 - c_i) m_i + gain_i · v` for every row.
    pub(crate) fn accumulate(&mut self, rates: &[f64], gains: &[f64], v: &[f64], ops: &mut u64) {
        for i in 0..self.k {
            let decay = 1.0 - rates[i];
            let gain = gains[i];
            for (mi, vi) in self.row_mut(i).iter_mut().zip(v) {
                *mi = decay * *mi + gain * vi;
            }
            *ops += 3 * self.n as u64;
        }
    }
}
