use lmmaes::moea::dominates;
use lmmaes::problems::{make_biobjective, BiObjectiveProblem, PROBLEM_IDS};
use lmmaes::rng::{seeded, standard_normal_vec};
use rand::Rng as _;

fn suite() -> Vec<BiObjectiveProblem> {
    let mut out = Vec::new();
    for &n in &[8usize, 32] {
        for id in PROBLEM_IDS {
            out.push(make_biobjective(id, n, 1e3, 42).unwrap());
        }
    }
    out
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[test]
fn pareto_set_maps_onto_linear_front() {
    let mut rng = seeded(1);
    for p in suite() {
        for _ in 0..100 {
            let s: f64 = rng.random();
            let f = p.eval(&p.pareto_set_point(s).unwrap()).unwrap();
            assert!((f[0] - s).abs() < 1e-9 && (f[1] - (1.0 - s)).abs() < 1e-9, "id {} n {}: {f:?} at s={s}", p.id(), p.dimension());
        }
    }
}

#[test]
fn gradients_are_anti_parallel_on_the_segment() {
    let mut rng = seeded(2);
    for p in suite() {
        for _ in 0..20 {
            let s = rng.random_range(0.05..0.95);
            let x = p.pareto_set_point(s).unwrap();
            let [g1, g2] = p.gradients(&x).unwrap();
            let c = cosine(&g1, &g2);
            assert!(c <= -1.0 + 1e-6, "id {}: cosine {c}", p.id());
        }
    }
}

#[test]
fn gradients_match_central_differences() {
    let mut rng = seeded(3);
    let h = 1e-6;
    for p in suite() {
        let n = p.dimension();
        for _ in 0..5 {
            let x = standard_normal_vec(&mut rng, n);
            let analytic = p.gradients(&x).unwrap();
            for i in 0..2 {
                let numeric: Vec<f64> = (0..n)
                    .map(|j| {
                        let mut up = x.clone();
                        let mut down = x.clone();
                        up[j] += h;
                        down[j] -= h;
                        (p.eval(&up).unwrap()[i] - p.eval(&down).unwrap()[i]) / (2.0 * h)
                    })
                    .collect();
                let err: f64 = numeric.iter().zip(&analytic[i]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                let scale: f64 = analytic[i].iter().map(|a| a * a).sum::<f64>().sqrt();
                assert!(err <= 1e-4 * scale, "id {} objective {i}: relative error {}", p.id(), err / scale);
            }
        }
    }
}

#[test]
fn perturbations_never_dominate_the_segment() {
    let mut rng = seeded(4);
    for p in suite() {
        for _ in 0..100 {
            let s: f64 = rng.random();
            let x = p.pareto_set_point(s).unwrap();
            let u = unit(standard_normal_vec(&mut rng, p.dimension()));
            let moved: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + 1e-2 * b).collect();
            let fx = p.eval(&x).unwrap();
            let fy = p.eval(&moved).unwrap();
            assert!(!dominates(&fy, &fx), "id {}: {fy:?} dominates {fx:?}", p.id());
        }
    }
}

#[test]
fn construction_is_deterministic() {
    for id in PROBLEM_IDS {
        let a = make_biobjective(id, 16, 1e3, 7).unwrap();
        let b = make_biobjective(id, 16, 1e3, 7).unwrap();
        assert_eq!(a, b);
        let x: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let (fa, fb) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
        assert_eq!(fa[0].to_bits(), fb[0].to_bits());
        assert_eq!(fa[1].to_bits(), fb[1].to_bits());
    }
}

#[test]
fn rotated_problems_depend_on_the_seed() {
    let a = make_biobjective(9, 8, 1e3, 1).unwrap();
    let b = make_biobjective(9, 8, 1e3, 2).unwrap();
    let x = vec![0.3; 8];
    assert_ne!(a.eval(&x).unwrap(), b.eval(&x).unwrap());
}
