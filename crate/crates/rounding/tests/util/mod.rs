//! Shared fixtures for the rounding tests.

// Each test binary compiles its own copy and uses a different subset.
#![allow(dead_code)]

use nalgebra::DMatrix;
use oracle::OracleY;
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

/// Relaxed point with a prescribed eigenvalue profile in a random basis.
pub fn relaxed_with_spectrum(rng: &mut SeedRng, eigs: &[f64], k: usize) -> RelaxedY {
    let n = eigs.len();
    let q = random_frame(rng, n, n);
    let mut y = DMatrix::zeros(n, n);
    for (l, &s) in eigs.iter().enumerate() {
        let col = q.column(l).clone_owned();
        y.ger(s, &col, &col, 1.0);
    }
    RelaxedY::new(SymMatrix::new(y), k).unwrap()
}

/// Fractional hull point: random spectrum in (0.05, 0.95) scaled onto the
/// trace budget, in a random eigenbasis.
pub fn random_relaxed(rng: &mut SeedRng, n: usize, k: usize) -> RelaxedY {
    let mut s: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.05, 0.95)).collect();
    let total: f64 = s.iter().sum();
    if total > k as f64 {
        for v in &mut s {
            *v *= k as f64 / total;
        }
    }
    relaxed_with_spectrum(rng, &s, k)
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

/// Fully observed instance with the given matrix as both data and truth.
pub fn full_observation(a: &DMatrix<f64>) -> MatrixCompletionInstance {
    let mut omega = Vec::new();
    let mut values = Vec::new();
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            omega.push((i, j));
            values.push(a[(i, j)]);
        }
    }
    MatrixCompletionInstance::new(a.nrows(), a.ncols(), omega, values, Some(a.clone())).unwrap()
}

/// Largest singular value of the oracle multiplier over the given points —
/// the empirical stand-in for the `L` constant in the rounding certificate.
pub fn multiplier_spectral_bound(problem: &RankProblem, points: &[OracleY]) -> f64 {
    points
        .iter()
        .map(|y| {
            let alpha = oracle::eval_f(problem, y).unwrap().alpha;
            svd_thin(&alpha).unwrap().sigma.iter().copied().fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
