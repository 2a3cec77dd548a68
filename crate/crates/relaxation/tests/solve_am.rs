//! End-to-end alternating minimization: certified gaps on closed-form and
//! planted instances, and weak-duality invariants of the reported bounds.

mod util;

use oracle::OracleY;
use problem_model::SeedRng;
use relaxation::solve_relaxation_am;
use util::*;

#[test]
fn scalar_instance_certifies_immediately() {
    // f(y) = 1 / (y + 1) at gamma = 0.5; optimum 0.5 at y = 1, and the
    // multiplier alpha = -1 certifies it exactly.
    let problem = scalar_problem(0.5, 0.0);
    let sol = solve_relaxation_am(&problem, 1e-8, 50).unwrap();
    assert!(sol.report.converged);
    assert!(sol.report.iterations <= 3, "took {}", sol.report.iterations);
    assert!((sol.primal - 0.5).abs() <= 1e-9);
    assert!((sol.dual - 0.5).abs() <= 1e-9);
    assert!((sol.y.mat()[(0, 0)] - 1.0).abs() <= 1e-9);
    assert!((sol.x[(0, 0)] - 0.5).abs() <= 1e-9);
}

#[test]
fn planted_midsize_gap_closes() {
    let problem = planted_problem(20, 20, 2, 0.4, 0.05, 2, 0.0, 20.0 / 0.4, 42);
    let sol = solve_relaxation_am(&problem, 1e-3, 3000).unwrap();
    assert!(
        sol.report.converged,
        "gap stalled at {} after {} iterations",
        sol.report.rel_gap, sol.report.iterations
    );
    assert!(sol.report.cg_clean);
    assert!(sol.dual <= sol.primal + 1e-9);
}

#[test]
fn reported_dual_never_exceeds_primal() {
    let mut rng = SeedRng::new(21);
    for trial in 0..6 {
        let n = 4 + trial;
        let mut problem = random_completion(&mut rng, n, n, 2, 0.5, 1.0 + trial as f64);
        problem.lambda = 0.05 * (trial % 3) as f64;
        let sol = solve_relaxation_am(&problem, 1e-6, 400).unwrap();
        assert!(
            sol.dual <= sol.primal + 1e-9,
            "trial {trial}: dual {} above primal {}",
            sol.dual,
            sol.primal
        );
        let eval = oracle::eval_f(&problem, &OracleY::Relaxed(sol.y.clone())).unwrap();
        let at_y = eval.fval + problem.lambda * sol.y.trace();
        assert!((at_y - sol.primal).abs() <= 1e-8 * (1.0 + sol.primal.abs()));
    }
}

#[test]
fn dual_bound_holds_at_random_projections() {
    let mut rng = SeedRng::new(33);
    let problem = planted_problem(8, 8, 1, 0.6, 0.1, 1, 0.1, 10.0, 7);
    let sol = solve_relaxation_am(&problem, 1e-6, 600).unwrap();
    for _ in 0..20 {
        let p = random_projection(&mut rng, 8, 1);
        let r = oracle::eval_f(&problem, &OracleY::Projection(p.clone())).unwrap();
        let val = r.fval + problem.lambda * p.trace();
        assert!(sol.dual <= val + 1e-8 * (1.0 + val.abs()));
    }
}
