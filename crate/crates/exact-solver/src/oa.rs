//! Outer approximation: alternate an exact (or certified-bound) master over
//! the projection set with oracle evaluations that append fresh cuts, until
//! the sandwich closes to `eps`.

use std::time::Instant;

use nalgebra::DMatrix;
use oracle::OracleY;
use problem_model::{Cut, RankProblem};
use relaxation::{am_dual_bound, relaxed_master, MasterWarmth};
use spectra_core::ProjectionMatrix;

use crate::master::{master_solve_heuristic, master_solve_k1};
use crate::ExactError;

#[derive(Debug, Clone)]
pub struct OaLimits {
    pub max_iterations: usize,
    /// Node budget per rank-one master solve.
    pub node_limit: usize,
    pub max_cuts: usize,
}

impl Default for OaLimits {
    fn default() -> Self {
        OaLimits { max_iterations: 60, node_limit: 400_000, max_cuts: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OaStatus {
    Converged,
    LimitReached,
}

#[derive(Debug, Clone)]
pub struct OaReport {
    pub y: ProjectionMatrix,
    /// Best `f(Y) + lambda tr(Y)` over all oracle evaluations.
    pub upper: f64,
    /// Largest certified lower bound seen (master theta, hull master, or
    /// the alternating-minimization dual — whichever is strongest).
    pub lower: f64,
    /// Conservative gap: `upper - lower` plus the oracle duality residual.
    pub gap: f64,
    pub certified: bool,
    pub status: OaStatus,
    pub iterations: usize,
    pub cuts: usize,
    pub nodes: usize,
    pub seconds: f64,
    pub lb_trace: Vec<f64>,
    pub ub_trace: Vec<f64>,
    /// Every point the oracle was called at, in order.
    pub iterates: Vec<ProjectionMatrix>,
}

/// Duality slop carried by each cut height; added to the reported gap.
const ORACLE_RESIDUAL: f64 = 1e-6;
const HEURISTIC_RESTARTS: usize = 20;

fn coordinate_projection(n: usize, k: usize) -> ProjectionMatrix {
    let factor = DMatrix::<f64>::identity(n, k.min(n));
    ProjectionMatrix::from_factor(factor).expect("identity columns are orthonormal")
}

pub fn solve_exact(
    problem: &RankProblem,
    eps: f64,
    warm_cuts: &[Cut],
    warm_start: Option<&ProjectionMatrix>,
    limits: &OaLimits,
) -> Result<OaReport, ExactError> {
    assert!(eps > 0.0, "eps must be positive");
    let start = Instant::now();
    let n = problem.n;
    let k = problem.k;
    let lambda = problem.lambda;
    let gamma = problem.gamma().ok_or(oracle::OracleError::UnsupportedRegularizer)?;

    let mut pool: Vec<Cut> = warm_cuts.to_vec();
    let mut warmth = MasterWarmth::default();
    let mut lower = f64::NEG_INFINITY;
    let mut nodes = 0usize;
    let mut lb_trace = Vec::new();
    let mut ub_trace = Vec::new();
    let mut iterates = Vec::new();

    // Seed evaluation: the caller's warm start or the first-k-coordinates
    // projection. This pins the first upper bound and (with an empty warm
    // pool) the first cut.
    let y0 = warm_start.cloned().unwrap_or_else(|| coordinate_projection(n, k));
    let r0 = oracle::eval_f(problem, &OracleY::Projection(y0.clone()))?;
    let mut upper = r0.fval + lambda * y0.trace();
    let mut incumbent = y0.clone();
    pool.push(oracle::make_cut(&r0, &y0.to_sym())?);
    iterates.push(y0);
    ub_trace.push(upper);
    lower = lower.max(am_dual_bound(problem, &r0.alpha, k, lambda, gamma)?);

    let mut status = OaStatus::LimitReached;
    let mut iterations = 0usize;
    while iterations < limits.max_iterations {
        iterations += 1;

        // Master over the current pool; every branch deposits a certified
        // bound into `lower`.
        let next_y = if k == 1 {
            let m = master_solve_k1(&pool, lambda, n, 0.25 * eps, limits.node_limit)?;
            nodes += m.nodes;
            if m.certified {
                lower = lower.max(m.theta);
            } else {
                lower = lower.max(m.theta);
                let rb = relaxed_master(&pool, lambda, n, k, 1e-9, &mut warmth)?;
                lower = lower.max(rb.lower);
            }
            m.y
        } else {
            let h = master_solve_heuristic(&pool, lambda, n, k, HEURISTIC_RESTARTS)?;
            lower = lower.max(h.relaxed_lb);
            h.y
        };
        lb_trace.push(lower);

        if upper - lower <= eps * (1.0 + upper.abs()) {
            status = OaStatus::Converged;
            break;
        }
        if pool.len() >= limits.max_cuts {
            break;
        }

        let r = oracle::eval_f(problem, &OracleY::Projection(next_y.clone()))?;
        let val = r.fval + lambda * next_y.trace();
        if val < upper {
            upper = val;
            incumbent = next_y.clone();
        }
        ub_trace.push(upper);
        pool.push(oracle::make_cut(&r, &next_y.to_sym())?);
        iterates.push(next_y);
        lower = lower.max(am_dual_bound(problem, &r.alpha, k, lambda, gamma)?);
    }

    let gap = (upper - lower).max(0.0) + ORACLE_RESIDUAL * (1.0 + upper.abs());
    Ok(OaReport {
        y: incumbent,
        upper,
        lower,
        gap,
        certified: status == OaStatus::Converged,
        status,
        iterations,
        cuts: pool.len(),
        nodes,
        seconds: start.elapsed().as_secs_f64(),
        lb_trace,
        ub_trace,
        iterates,
    })
}
