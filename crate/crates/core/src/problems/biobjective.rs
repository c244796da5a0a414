use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::quadratic::{log_uniform_spectrum, random_rotation, QuadraticForm, Rotation};
use crate::error::{check_len, Error, Result};
use crate::rng::{split, standard_normal_vec, PROBLEM_STREAM};

pub const PROBLEM_IDS: std::ops::RangeInclusive<u32> = 1..=9;
pub const REFERENCE_POINT: [f64; 2] = [10.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Sphere,
    Ellipsoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    /// Coordinate axes.
    Axes,
    /// Random rotation number `k` of this problem instance.
    Rotated(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy)]
struct FormSpec {
    shape: Shape,
    basis: Basis,
    order: Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Segment {
    FirstAxis,
    RandomUnit,
    PencilEigenvector,
}

#[derive(Debug, Clone, Copy)]
struct Row {
    name: &'static str,
    forms: [FormSpec; 2],
    segment: Segment,
}

const fn form(shape: Shape, basis: Basis, order: Order) -> FormSpec {
    FormSpec { shape, basis, order }
}

const SPHERE: FormSpec = form(Shape::Sphere, Basis::Axes, Order::Ascending);
const ELL_AXES: FormSpec = form(Shape::Ellipsoid, Basis::Axes, Order::Ascending);
const ELL_AXES_REV: FormSpec = form(Shape::Ellipsoid, Basis::Axes, Order::Descending);
const ELL_ROT0: FormSpec = form(Shape::Ellipsoid, Basis::Rotated(0), Order::Ascending);
const ELL_ROT0_REV: FormSpec = form(Shape::Ellipsoid, Basis::Rotated(0), Order::Descending);
const ELL_ROT1_REV: FormSpec = form(Shape::Ellipsoid, Basis::Rotated(1), Order::Descending);

const ROWS: [Row; 9] = [
    Row { name: "two spheres", forms: [SPHERE, SPHERE], segment: Segment::FirstAxis },
    Row { name: "sphere + ellipsoid", forms: [SPHERE, ELL_AXES], segment: Segment::FirstAxis },
    Row { name: "two ellipsoids", forms: [ELL_AXES, ELL_AXES], segment: Segment::FirstAxis },
    Row { name: "two ellipsoids", forms: [ELL_AXES, ELL_AXES_REV], segment: Segment::FirstAxis },
    Row {
        name: "sphere + ellipsoid",
        forms: [SPHERE, ELL_ROT0],
        segment: Segment::PencilEigenvector,
    },
    Row {
        name: "two ellipsoids",
        forms: [ELL_AXES, ELL_ROT0_REV],
        segment: Segment::PencilEigenvector,
    },
    Row { name: "two ellipsoids", forms: [ELL_ROT0, ELL_ROT0], segment: Segment::RandomUnit },
    Row {
        name: "two ellipsoids",
        forms: [ELL_ROT0, ELL_ROT0_REV],
        segment: Segment::PencilEigenvector,
    },
    Row {
        name: "two ellipsoids",
        forms: [ELL_ROT0, ELL_ROT1_REV],
        segment: Segment::PencilEigenvector,
    },
];

const SEGMENT_STREAM: u64 = PROBLEM_STREAM + 1000;

/// Bi-objective problem `f_i(x) = sqrt((x - c_i)ᵀ H_i (x - c_i) / s_i)`.
///
/// The Pareto set is the segment from `c_1` to `c_2` and its image is the line
/// from `(0, 1)` to `(1, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiObjectiveProblem {
    id: u32,
    dimension: usize,
    condition: f64,
    seed: u64,
    forms: [QuadraticForm; 2],
    centers: [Vec<f64>; 2],
    delta: Vec<f64>,
    normalizers: [f64; 2],
    rotation_seeds: Vec<[u64; 2]>,
}

/// Everything needed to rebuild a [`BiObjectiveProblem`], plus the derived data
/// for inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDescriptor {
    pub id: u32,
    pub name: String,
    pub n: usize,
    pub condition: f64,
    pub seed: u64,
    pub centers: [Vec<f64>; 2],
    pub spectra: [Vec<f64>; 2],
    /// `(seed, stream)` of each random rotation used.
    pub rotation_seeds: Vec<[u64; 2]>,
    pub normalizers: [f64; 2],
    pub reference_point: [f64; 2],
}

/// Builds problem `id` (1..=9) in dimension `n`.
pub fn make_biobjective(id: u32, n: usize, condition: f64, seed: u64) -> Result<BiObjectiveProblem> {
    let row = *ROWS
        .get((id as usize).wrapping_sub(1))
        .ok_or(Error::UnknownProblem(id))?;
    if n < 2 {
        return Err(Error::contract(format!("dimension must be at least 2, got {n}")));
    }
    if !(condition.is_finite() && condition >= 1.0) {
        return Err(Error::contract(format!("condition number must be >= 1, got {condition}")));
    }

    let mut rotation_seeds = Vec::new();
    let mut rotations: Vec<Option<DMatrix<f64>>> = vec![None, None];
    let make_form = |spec: FormSpec,
                     rotations: &mut Vec<Option<DMatrix<f64>>>,
                     rotation_seeds: &mut Vec<[u64; 2]>|
     -> Result<QuadraticForm> {
        let spectrum = match spec.shape {
            Shape::Sphere => vec![1.0; n],
            Shape::Ellipsoid => {
                let mut s = log_uniform_spectrum(n, condition);
                if spec.order == Order::Descending {
                    s.reverse();
                }
                s
            }
        };
        match (spec.shape, spec.basis) {
            (Shape::Sphere, _) | (_, Basis::Axes) => QuadraticForm::aligned(spectrum),
            (_, Basis::Rotated(k)) => {
                let slot = &mut rotations[k as usize];
                let q = slot.get_or_insert_with(|| {
                    let stream = PROBLEM_STREAM + k;
                    rotation_seeds.push([seed, stream]);
                    random_rotation(n, &mut split(seed, stream))
                });
                QuadraticForm::rotated(q.clone(), spectrum)
            }
        }
    };
    let f1 = make_form(row.forms[0], &mut rotations, &mut rotation_seeds)?;
    let f2 = make_form(row.forms[1], &mut rotations, &mut rotation_seeds)?;

    let mut delta = match row.segment {
        Segment::FirstAxis => {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            e
        }
        Segment::RandomUnit => standard_normal_vec(&mut split(seed, SEGMENT_STREAM), n),
        Segment::PencilEigenvector => pencil_eigenvector(&f1, &f2)?,
    };
    let norm = delta.iter().map(|v| v * v).sum::<f64>().sqrt();
    delta.iter_mut().for_each(|v| *v /= norm);

    let normalizers = [f1.quad(&delta), f2.quad(&delta)];
    let c1 = vec![0.0; n];
    let c2 = delta.clone();
    Ok(BiObjectiveProblem {
        id,
        dimension: n,
        condition,
        seed,
        forms: [f1, f2],
        centers: [c1, c2],
        delta,
        normalizers,
        rotation_seeds,
    })
}

/// Dominant eigenvector `v` of the pencil `(H_1, H_2)`, i.e. `H_1 v = β H_2 v`
/// for the largest `β`, via the reduction `L⁻¹ H_1 L⁻ᵀ` with `H_2 = L Lᵀ`.
fn pencil_eigenvector(f1: &QuadraticForm, f2: &QuadraticForm) -> Result<Vec<f64>> {
    let h1 = f1.dense();
    let h2 = f2.dense();
    let chol = h2
        .cholesky()
        .ok_or_else(|| Error::contract("second Hessian is not positive definite"))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(&h1)
        .ok_or_else(|| Error::contract("singular Cholesky factor"))?;
    let b = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::contract("singular Cholesky factor"))?;
    let b = (&b + b.transpose()) * 0.5;
    let eig = SymmetricEigen::new(b);
    let top = eig.eigenvalues.imax();
    let u: DVector<f64> = eig.eigenvectors.column(top).into_owned();
    let mut v = l
        .transpose()
        .solve_upper_triangular(&u)
        .ok_or_else(|| Error::contract("singular Cholesky factor"))?;
    // fix the sign so the largest-magnitude coordinate is positive
    if v[v.iamax()] < 0.0 {
        v.neg_mut();
    }
    Ok(v.as_slice().to_vec())
}

impl BiObjectiveProblem {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &'static str {
        ROWS[self.id as usize - 1].name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn forms(&self) -> &[QuadraticForm; 2] {
        &self.forms
    }

    pub fn centers(&self) -> &[Vec<f64>; 2] {
        &self.centers
    }

    /// `c_2 - c_1`.
    pub fn segment_direction(&self) -> &[f64] {
        &self.delta
    }

    pub fn normalizers(&self) -> [f64; 2] {
        self.normalizers
    }

    pub fn reference_point(&self) -> [f64; 2] {
        REFERENCE_POINT
    }

    /// Whether both Hessians are the same matrix.
    pub fn same_hessian(&self) -> bool {
        self.forms[0] == self.forms[1]
    }

    /// Whether the eigenbases of the Hessians are the coordinate axes.
    pub fn axis_aligned(&self) -> [bool; 2] {
        self.forms.each_ref().map(|f| {
            matches!(f.rotation(), Rotation::Identity)
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<[f64; 2]> {
        check_len(self.dimension, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        let mut diff = vec![0.0; x.len()];
        for i in 0..2 {
            for ((d, xv), cv) in diff.iter_mut().zip(x).zip(&self.centers[i]) {
                *d = xv - cv;
            }
            out[i] = (self.forms[i].quad(&diff) / self.normalizers[i]).sqrt();
        }
        out
    }

    /// Analytic gradients of both objectives (zero at the respective center).
    pub fn gradients(&self, x: &[f64]) -> Result<[Vec<f64>; 2]> {
        self.forms[0].check_dimension(x)?;
        let values = self.eval_unchecked(x);
        Ok(std::array::from_fn(|i| {
            let diff: Vec<f64> = x.iter().zip(&self.centers[i]).map(|(a, b)| a - b).collect();
            if values[i] == 0.0 {
                return vec![0.0; x.len()];
            }
            let scale = 1.0 / (self.normalizers[i] * values[i]);
            self.forms[i].apply(&diff).into_iter().map(|g| g * scale).collect()
        }))
    }

    /// `c_1 + s δ`, whose image is `(s, 1 - s)`.
    pub fn pareto_set_point(&self, s: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::contract(format!("segment parameter {s} outside [0, 1]")));
        }
        Ok(self.centers[0].iter().zip(&self.delta).map(|(c, d)| c + s * d).collect())
    }

    pub fn descriptor(&self) -> ProblemDescriptor {
        ProblemDescriptor {
            id: self.id,
            name: self.name().to_string(),
            n: self.dimension,
            condition: self.condition,
            seed: self.seed,
            centers: self.centers.clone(),
            spectra: self.forms.each_ref().map(|f| f.spectrum().to_vec()),
            rotation_seeds: self.rotation_seeds.clone(),
            normalizers: self.normalizers,
            reference_point: REFERENCE_POINT,
        }
    }

    /// Rebuilds the problem and verifies the derived data recorded in the descriptor.
    pub fn from_descriptor(desc: &ProblemDescriptor) -> Result<Self> {
        let problem = make_biobjective(desc.id, desc.n, desc.condition, desc.seed)?;
        let rebuilt = problem.descriptor();
        let same = rebuilt.centers == desc.centers
            && rebuilt.spectra == desc.spectra
            && rebuilt.rotation_seeds == desc.rotation_seeds
            && rebuilt.normalizers == desc.normalizers;
        if !same {
            return Err(Error::contract(format!(
                "descriptor for problem {} does not match its reconstruction",
                desc.id
            )));
        }
        Ok(problem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine(a: &[f64], b: &[f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        dot / (na * nb)
    }

    #[test]
    fn unknown_ids_rejected() {
        assert_eq!(make_biobjective(0, 4, 1e3, 1), Err(Error::UnknownProblem(0)));
        assert_eq!(make_biobjective(10, 4, 1e3, 1), Err(Error::UnknownProblem(10)));
        assert!(make_biobjective(1, 1, 1e3, 1).is_err());
        assert!(make_biobjective(3, 4, 0.5, 1).is_err());
    }

    #[test]
    fn two_spheres() {
        let p = make_biobjective(1, 7, 1e3, 11).unwrap();
        assert!(p.same_hessian());
        for f in p.forms() {
            assert_eq!(f.spectrum(), &[1.0; 7]);
            assert_eq!(f.rotation(), &Rotation::Identity);
        }
        let mid = p.pareto_set_point(0.5).unwrap();
        let expected_mid: Vec<f64> =
            p.centers()[0].iter().zip(&p.centers()[1]).map(|(a, b)| 0.5 * (a + b)).collect();
        assert_eq!(mid, expected_mid);
        let f = p.eval(&mid).unwrap();
        assert!((f[0] - 0.5).abs() < 1e-12 && (f[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_spectra() {
        let p = make_biobjective(3, 4, 1e3, 0).unwrap();
        assert!(p.same_hessian());
        for f in p.forms() {
            for (a, b) in f.spectrum().iter().zip([1.0, 10.0, 100.0, 1000.0]) {
                assert!((a - b).abs() <= 1e-12 * b);
            }
        }
        let p4 = make_biobjective(4, 4, 1e3, 0).unwrap();
        assert_eq!(p4.forms()[1].spectrum()[0], 1e3);
        assert_eq!(p4.forms()[1].spectrum()[3], 1.0);
    }

    #[test]
    fn table_structure() {
        for id in PROBLEM_IDS {
            let p = make_biobjective(id, 6, 1e3, 5).unwrap();
            let aligned = p.axis_aligned();
            let expect_same = matches!(id, 1 | 3 | 7);
            assert_eq!(p.same_hessian(), expect_same, "id {id}");
            match id {
                1..=4 => assert_eq!(aligned, [true, true]),
                5 | 6 => assert_eq!(aligned, [true, false]),
                _ => assert_eq!(aligned, [false, false]),
            }
            if id == 8 {
                let [Rotation::Dense(a), Rotation::Dense(b)] =
                    p.forms().each_ref().map(|f| f.rotation().clone())
                else {
                    panic!()
                };
                assert_eq!(a, b);
            }
            if id == 9 {
                assert_ne!(p.forms()[0].rotation(), p.forms()[1].rotation());
            }
        }
    }

    #[test]
    fn normalization_and_pencil() {
        for id in PROBLEM_IDS {
            for seed in [0, 1, 2] {
                let p = make_biobjective(id, 8, 1e3, seed).unwrap();
                let [c1, c2] = p.centers().clone();
                let a = p.eval(&c1).unwrap();
                let b = p.eval(&c2).unwrap();
                assert_eq!(a[0], 0.0);
                assert_eq!(b[1], 0.0);
                assert!((a[1] - 1.0).abs() < 1e-12, "id {id}: {a:?}");
                assert!((b[0] - 1.0).abs() < 1e-12, "id {id}: {b:?}");
                let delta = p.segment_direction();
                let h1d = p.forms()[0].apply(delta);
                let h2d = p.forms()[1].apply(delta);
                assert!(cosine(&h1d, &h2d) >= 1.0 - 1e-10, "id {id} seed {seed}");
                let q = p.pareto_set_point(0.25).unwrap();
                let f = p.eval(&q).unwrap();
                assert!((f[0] - 0.25).abs() < 1e-10 && (f[1] - 0.75).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn segment_bounds() {
        let p = make_biobjective(2, 4, 1e3, 0).unwrap();
        assert_eq!(&p.pareto_set_point(0.0).unwrap(), &p.centers()[0]);
        assert_eq!(&p.pareto_set_point(1.0).unwrap(), &p.centers()[1]);
        assert!(p.pareto_set_point(1.5).is_err());
        assert!(p.pareto_set_point(-0.1).is_err());
        assert!(p.pareto_set_point(f64::NAN).is_err());
        assert_eq!(p.eval(&[0.0; 3]), Err(Error::DimensionMismatch { expected: 4, got: 3 }));
    }

    #[test]
    fn descriptor_round_trip() {
        let p = make_biobjective(9, 10, 1e3, 42).unwrap();
        let json = serde_json::to_string(&p.descriptor()).unwrap();
        let desc: ProblemDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(desc.rotation_seeds.len(), 2);
        let q = BiObjectiveProblem::from_descriptor(&desc).unwrap();
        assert_eq!(p, q);

        let mut tampered = desc.clone();
        tampered.centers[1][0] += 1e-9;
        assert!(BiObjectiveProblem::from_descriptor(&tampered).is_err());
    }
}
