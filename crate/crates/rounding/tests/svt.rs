mod util;

use nalgebra::DMatrix;
use problem_model::SeedRng;
use rounding::{
    burer_monteiro, greedy_round, relative_mse, svt_baseline, svt_best, RoundError,
};
use util::*;

#[test]
fn vanishing_penalty_reproduces_full_observations() {
    // With every entry observed the gradient step lands exactly on A, and a
    // negligible threshold leaves it there.
    let mut rng = SeedRng::new(3);
    let a = gaussian(&mut rng, 5, 4);
    let inst = full_observation(&a);
    let x = svt_baseline(&inst, 1e-12, 1e-12, 500);
    assert!((&x - &a).amax() < 1e-6);
}

#[test]
fn huge_penalty_collapses_to_zero() {
    let mut rng = SeedRng::new(4);
    let a = gaussian(&mut rng, 6, 6);
    let inst = full_observation(&a);
    // From X = 0 the shifted iterate is A itself; a threshold above its
    // largest singular value wipes every direction, so zero is stationary.
    let mu = 4.0 * a.norm() / 0.5;
    let x = svt_baseline(&inst, mu, 1e-12, 100);
    assert_eq!(x, DMatrix::zeros(6, 6));
}

#[test]
fn penalty_sweep_picks_a_grid_point_and_fits() {
    let problem = planted_problem(16, 16, 1, 0.6, 0.0, 1, 0.0, 100.0, 21);
    let inst = problem.payload.completion().unwrap();
    let (x, mu) = svt_best(inst, 1e-9, 400, 77);
    let scale = inst.sum_sq().sqrt();
    let on_grid = [1e-3, 1e-2, 1e-1, 1.0, 1e1]
        .iter()
        .any(|m| (mu - m * scale).abs() <= 1e-12 * scale);
    assert!(on_grid, "returned penalty {mu} is not a grid point");
    // A planted noiseless rank-1 instance at 60% sampling is easy; the
    // validated penalty should do clearly better than coin-flip recovery.
    assert!(relative_mse(&x, inst).unwrap() < 0.5);
}

#[test]
fn local_refinement_beats_the_nuclear_baseline() {
    // Paired comparison on planted rank-1 data: greedy rounding of the
    // relaxation plus factored refinement against the validated
    // soft-thresholding fit, same instance, same observations.
    let mut bm_total = 0.0;
    let mut svt_total = 0.0;
    for seed in [1, 2, 3] {
        let problem = planted_problem(20, 20, 1, 0.5, 0.0, 1, 0.0, 500.0 / 0.5, seed);
        let inst = problem.payload.completion().unwrap();

        let relax = relaxation::solve_relaxation_am(&problem, 1e-4, 4000).unwrap();
        let factor = greedy_round(&relax.y, 1).factor().clone();
        let bm = burer_monteiro(&problem, &factor, 1e-10, 200).unwrap();
        bm_total += relative_mse(&bm.x, inst).unwrap();

        let (x_svt, _) = svt_best(inst, 1e-9, 400, seed);
        svt_total += relative_mse(&x_svt, inst).unwrap();
    }
    assert!(
        bm_total < svt_total,
        "refined rounding (mean rel-MSE {}) should beat thresholding ({})",
        bm_total / 3.0,
        svt_total / 3.0
    );
}

#[test]
fn relative_mse_frozen_values() {
    let problem = planted_problem(8, 8, 1, 0.6, 0.05, 1, 0.0, 10.0, 2);
    let inst = problem.payload.completion().unwrap();
    let truth = inst.ground_truth.clone().unwrap();

    assert_eq!(relative_mse(&truth, inst).unwrap(), 0.0);
    assert!((relative_mse(&DMatrix::zeros(8, 8), inst).unwrap() - 1.0).abs() < 1e-12);
    assert!((relative_mse(&(&truth * 2.0), inst).unwrap() - 1.0).abs() < 1e-12);

    let mut rng = SeedRng::new(6);
    let blind = random_completion(&mut rng, 4, 4, 1, 0.8, 1.0);
    let blind_inst = blind.payload.completion().unwrap();
    match relative_mse(&DMatrix::zeros(4, 4), blind_inst) {
        Err(RoundError::MissingGroundTruth) => {}
        other => panic!("expected a missing-truth error, got {other:?}"),
    }
}
