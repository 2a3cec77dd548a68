//! Outer approximation of the relaxation with in-out stabilized queries.
//!
//! Each oracle evaluation yields a cut underestimating `f` on the hull, so
//! the master value is a valid lower bound on `min f(Y) + lambda tr(Y)`.
//! Query points are blended toward a stabilizer (a good feasible point,
//! e.g. the alternating-minimization output) and nudged into the interior,
//! which keeps early cuts deep instead of tangent at far-away corners.

use problem_model::{Cut, RankProblem};
use spectra_core::{project_conv_y, RelaxedY, SymMatrix};

use crate::master::{relaxed_master, MasterWarmth};
use crate::RelaxError;

/// Consecutive non-improving iterations before the blend opens to 1 (pure
/// master point), then before the interior nudge is dropped.
const STALL_BLEND: usize = 5;
const STALL_DELTA: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InOutStatus {
    Converged,
    CutLimit,
}

#[derive(Debug, Clone)]
pub struct InOutSolution {
    /// Best evaluated point (lowest true objective seen).
    pub y: RelaxedY,
    pub upper_bound: f64,
    /// Certified lower bound on the relaxation optimum.
    pub lower_bound: f64,
    pub cuts: Vec<Cut>,
    /// Lower bound after each master solve; nondecreasing.
    pub lb_trace: Vec<f64>,
    pub status: InOutStatus,
}

fn true_value(problem: &RankProblem, y: &RelaxedY) -> Result<(f64, Cut), RelaxError> {
    let r = oracle::eval_f(problem, &oracle::OracleY::Relaxed(y.clone()))?;
    let cut = oracle::make_cut(&r, y.sym())?;
    Ok((r.fval + problem.lambda * y.trace(), cut))
}

/// Run stabilized outer approximation until the gap between the best
/// evaluated point and the master bound closes to `eps` (relative), or the
/// cut pool reaches `max_cuts`.
pub fn solve_relaxation_inout(
    problem: &RankProblem,
    stabilizer: &RelaxedY,
    eps: f64,
    max_cuts: usize,
) -> Result<InOutSolution, RelaxError> {
    let n = problem.n;
    let k = problem.k;
    let lambda = problem.lambda;

    // The master only has to out-resolve the outer gap target.
    let master_tol = (0.25 * eps).max(1e-8);

    let (mut upper, first_cut) = true_value(problem, stabilizer)?;
    let mut best_y = stabilizer.clone();
    let mut cuts = vec![first_cut];

    let mut warmth = MasterWarmth::default();
    warmth.y = Some(stabilizer.clone());

    let mut lower = f64::NEG_INFINITY;
    let mut lb_trace = Vec::new();
    let mut blend = 0.1;
    let mut delta = 2.0 * eps;
    let mut stall = 0usize;

    loop {
        let mb = relaxed_master(&cuts, lambda, n, k, master_tol, &mut warmth)?;
        // Master lower bounds are individually valid, not monotone across
        // growing pools (the dual restarts); keep the running max.
        lower = lower.max(mb.lower);
        lb_trace.push(lower);

        if upper - lower <= eps * (1.0 + upper.abs()) {
            return Ok(InOutSolution {
                y: best_y,
                upper_bound: upper,
                lower_bound: lower,
                cuts,
                lb_trace,
                status: InOutStatus::Converged,
            });
        }
        if cuts.len() >= max_cuts {
            return Ok(InOutSolution {
                y: best_y,
                upper_bound: upper,
                lower_bound: lower,
                cuts,
                lb_trace,
                status: InOutStatus::CutLimit,
            });
        }

        let mut q = mb.y.mat() * blend + best_y.mat() * (1.0 - blend);
        if delta > 0.0 {
            for i in 0..n {
                q[(i, i)] += delta;
            }
        }
        let query = project_conv_y(&SymMatrix::new(q), k)?;

        let (val, cut) = true_value(problem, &query)?;
        cuts.push(cut);
        if val < upper - 1e-12 * (1.0 + upper.abs()) {
            upper = val;
            best_y = query;
            stall = 0;
        } else {
            stall += 1;
            if stall >= STALL_DELTA {
                delta = 0.0;
            } else if stall >= STALL_BLEND {
                blend = 1.0;
            }
        }
    }
}
