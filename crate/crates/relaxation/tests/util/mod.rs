//! Shared fixtures for the relaxation tests.

// Each test binary compiles its own copy and uses a different subset.
#![allow(dead_code)]

use nalgebra::DMatrix;
use problem_model::{
    MatrixCompletionInstance, Payload, RankProblem, Regularizer, SeedRng,
};
use spectra_core::{svd_thin, ProjectionMatrix, RelaxedY, SymMatrix};

pub fn gaussian(rng: &mut SeedRng, n: usize, m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, m, |_, _| rng.normal())
}

/// Haar-ish orthonormal n x r frame from the left factor of a Gaussian.
pub fn random_frame(rng: &mut SeedRng, n: usize, r: usize) -> DMatrix<f64> {
    let u = svd_thin(&gaussian(rng, n, r)).unwrap().u;
    assert_eq!(u.ncols(), r, "Gaussian matrices have full rank");
    u
}

pub fn random_projection(rng: &mut SeedRng, n: usize, r: usize) -> ProjectionMatrix {
    if r == 0 {
        return ProjectionMatrix::zero(n);
    }
    ProjectionMatrix::from_factor(random_frame(rng, n, r)).unwrap()
}

pub fn random_relaxed(rng: &mut SeedRng, n: usize, k: usize) -> RelaxedY {
    let q = random_frame(rng, n, n);
    let mut s: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.05, 0.95)).collect();
    let total: f64 = s.iter().sum();
    if total > k as f64 {
        for v in &mut s {
            *v *= k as f64 / total;
        }
    }
    let mut y = DMatrix::zeros(n, n);
    for (l, &sl) in s.iter().enumerate() {
        let col = q.column(l);
        y.ger(sl, &col.clone_owned(), &col.clone_owned(), 1.0);
    }
    RelaxedY::new(SymMatrix::new(y), k).unwrap()
}

/// Dense hull point for cut evaluation.
pub fn random_hull_point(rng: &mut SeedRng, n: usize, k: usize) -> RelaxedY {
    let a = gaussian(rng, n, n);
    let sym = SymMatrix::new(&a * a.transpose() * (1.0 / n as f64));
    spectra_core::project_conv_y(&sym, k).unwrap()
}

/// One observed entry A = 1 on a 1x1 matrix; everything about the problem is
/// closed-form, which makes it the canonical smoke instance.
pub fn scalar_problem(gamma: f64, lambda: f64) -> RankProblem {
    let inst = MatrixCompletionInstance::new(1, 1, vec![(0, 0)], vec![1.0], None).unwrap();
    RankProblem::new(1, lambda, Regularizer::Frobenius { gamma }, Payload::Completion(inst))
        .unwrap()
}

pub fn random_completion(
    rng: &mut SeedRng,
    n: usize,
    m: usize,
    k: usize,
    p: f64,
    gamma: f64,
) -> RankProblem {
    let mut omega = Vec::new();
    let mut values = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if rng.uniform() < p {
                omega.push((i, j));
                values.push(rng.normal());
            }
        }
    }
    if omega.is_empty() {
        omega.push((0, 0));
        values.push(rng.normal());
    }
    let inst = MatrixCompletionInstance::new(n, m, omega, values, None).unwrap();
    RankProblem::new(k, 0.0, Regularizer::Frobenius { gamma }, Payload::Completion(inst)).unwrap()
}

/// Planted low-rank completion instance wrapped into a problem.
pub fn planted_problem(
    n: usize,
    m: usize,
    r: usize,
    p: f64,
    noise_sd: f64,
    k: usize,
    lambda: f64,
    gamma: f64,
    seed: u64,
) -> RankProblem {
    let inst = problem_model::gen_matrix_completion(n, m, r, p, noise_sd, seed).unwrap();
    RankProblem::new(k, lambda, Regularizer::Frobenius { gamma }, Payload::Completion(inst))
        .unwrap()
}

pub fn true_objective(problem: &RankProblem, y: &RelaxedY) -> f64 {
    let r = oracle::eval_f(problem, &oracle::OracleY::Relaxed(y.clone())).unwrap();
    r.fval + problem.lambda * y.trace()
}
