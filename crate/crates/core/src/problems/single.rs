use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingleKind {
    Sphere,
    Ellipsoid,
    Cigar,
    Discus,
    DifferentPowers,
    Rosenbrock,
}

impl SingleKind {
    pub const ALL: [SingleKind; 6] = [
        SingleKind::Sphere,
        SingleKind::Ellipsoid,
        SingleKind::Cigar,
        SingleKind::Discus,
        SingleKind::DifferentPowers,
        SingleKind::Rosenbrock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SingleKind::Sphere => "sphere",
            SingleKind::Ellipsoid => "ellipsoid",
            SingleKind::Cigar => "cigar",
            SingleKind::Discus => "discus",
            SingleKind::DifferentPowers => "different-powers",
            SingleKind::Rosenbrock => "rosenbrock",
        }
    }
}

impl fmt::Display for SingleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SingleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SingleKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::contract(format!("unknown single-objective function `{s}`")))
    }
}

/// One of the classic single-objective test functions in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleObjectiveProblem {
    pub kind: SingleKind,
    pub dimension: usize,
}

impl SingleObjectiveProblem {
    pub fn new(kind: SingleKind, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::contract(format!("dimension must be at least 2, got {dimension}")));
        }
        Ok(Self { kind, dimension })
    }

    /// Location of the global optimum (value 0).
    pub fn optimum(&self) -> Vec<f64> {
        match self.kind {
            SingleKind::Rosenbrock => vec![1.0; self.dimension],
            _ => vec![0.0; self.dimension],
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dimension, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let frac = |k: usize| k as f64 / (n - 1) as f64;
        match self.kind {
            SingleKind::Sphere => x.iter().map(|v| v * v).sum(),
            SingleKind::Ellipsoid => x
                .iter()
                .enumerate()
                .map(|(k, v)| 10f64.powf(6.0 * frac(k)) * v * v)
                .sum(),
            SingleKind::Cigar => x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>(),
            SingleKind::Discus => 1e6 * x[0] * x[0] + x[1..].iter().map(|v| v * v).sum::<f64>(),
            SingleKind::DifferentPowers => x
                .iter()
                .enumerate()
                .map(|(k, v)| v.abs().powf(2.0 + 4.0 * frac(k)))
                .sum(),
            SingleKind::Rosenbrock => x
                .windows(2)
                .map(|w| {
                    let a = w[1] - w[0] * w[0];
                    let b = w[0] - 1.0;
                    100.0 * a * a + b * b
                })
                .sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(kind: SingleKind, x: &[f64]) -> f64 {
        SingleObjectiveProblem::new(kind, x.len()).unwrap().eval(x).unwrap()
    }

    #[test]
    fn optima_are_zero() {
        for kind in SingleKind::ALL {
            let p = SingleObjectiveProblem::new(kind, 8).unwrap();
            assert_eq!(p.eval(&p.optimum()).unwrap(), 0.0, "{kind}");
        }
        assert_eq!(eval(SingleKind::Sphere, &[0.0; 8]), 0.0);
        assert_eq!(eval(SingleKind::Rosenbrock, &[1.0; 5]), 0.0);
    }

    #[test]
    fn formula_values() {
        assert_eq!(eval(SingleKind::Ellipsoid, &[0.0, 1.0]), 1e6);
        assert_eq!(eval(SingleKind::Cigar, &[1.0, 0.0, 0.0]), 1.0);
        assert_eq!(eval(SingleKind::Cigar, &[0.0, 1.0, 0.0]), 1e6);
        assert_eq!(eval(SingleKind::Discus, &[1.0, 0.0, 0.0]), 1e6);
        assert_eq!(eval(SingleKind::Discus, &[0.0, 0.0, 2.0]), 4.0);
        // exponents 2, 4, 6
        assert_eq!(eval(SingleKind::DifferentPowers, &[2.0, 2.0, 2.0]), 4.0 + 16.0 + 64.0);
        // 100 * (0 - 0)^2 + (0 - 1)^2
        assert_eq!(eval(SingleKind::Rosenbrock, &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn dimension_errors() {
        let p = SingleObjectiveProblem::new(SingleKind::Sphere, 4).unwrap();
        assert_eq!(p.eval(&[0.0; 3]), Err(Error::DimensionMismatch { expected: 4, got: 3 }));
        assert!(SingleObjectiveProblem::new(SingleKind::Sphere, 1).is_err());
    }

    #[test]
    fn parse_names() {
        for kind in SingleKind::ALL {
            assert_eq!(kind.name().parse::<SingleKind>().unwrap(), kind);
        }
        assert!("rastrigin".parse::<SingleKind>().is_err());
    }
}
