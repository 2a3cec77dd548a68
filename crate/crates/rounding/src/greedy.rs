//! Greedy eigenvalue rounding of a hull point to a projection matrix.

use oracle::OracleY;
use problem_model::RankProblem;
use spectra_core::{eig_sym, ProjectionMatrix, RelaxedY};

use crate::RoundError;

/// Eigenvalues below this are treated as numerically zero and never rounded
/// up (a lower-rank projection is feasible and cheaper).
const EIG_ZERO: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct RoundedSolution {
    pub y_greedy: ProjectionMatrix,
    pub f_greedy: f64,
    /// A-priori bound on `f(Y_greedy) - f(Ystar)`:
    /// `(gamma/2) * min(#fractional, n - k) * L^2` with `L` the caller's
    /// bound on the spectral norm of optimal multipliers.
    pub bound_gap_estimate: f64,
}

/// Round the `k` largest eigenvalues (those above `1e-9`) to one in the same
/// eigenbasis and drop the rest.
pub fn greedy_round(ystar: &RelaxedY, k: usize) -> ProjectionMatrix {
    let n = ystar.n();
    let pair = eig_sym(ystar.sym()).expect("hull points are finite");
    let kept = k.min(n).min((0..n).take_while(|&i| pair.values[i] > EIG_ZERO).count());
    if kept == 0 {
        return ProjectionMatrix::zero(n);
    }
    let factor = pair.vectors.columns(0, kept).clone_owned();
    ProjectionMatrix::from_factor(factor).expect("eigenbasis columns are orthonormal")
}

/// Rounding plus the value and the theorem-style gap certificate; `l_bound`
/// is an externally supplied spectral-norm bound on optimal multipliers.
pub fn round_with_certificate(
    problem: &RankProblem,
    ystar: &RelaxedY,
    l_bound: f64,
) -> Result<RoundedSolution, RoundError> {
    let n = ystar.n();
    let k = problem.k;
    let y_greedy = greedy_round(ystar, k);
    let f_greedy = oracle::eval_f(problem, &OracleY::Projection(y_greedy.clone()))?.fval;

    let pair = eig_sym(ystar.sym())?;
    let fractional = pair
        .values
        .iter()
        .filter(|&&v| v > EIG_ZERO && v < 1.0 - EIG_ZERO)
        .count();
    let gamma = problem.gamma().ok_or(oracle::OracleError::UnsupportedRegularizer)?;
    let budget = fractional.min(n.saturating_sub(k)) as f64;
    Ok(RoundedSolution {
        y_greedy,
        f_greedy,
        bound_gap_estimate: 0.5 * gamma * budget * l_bound * l_bound,
    })
}
