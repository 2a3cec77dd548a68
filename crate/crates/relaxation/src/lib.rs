//! Convex relaxation of the rank-constrained problem: minimize
//! `f(Y) + lambda tr(Y)` over the hull `{0 <= Y <= I, tr Y <= k}`, two ways.
//!
//! * Accelerated alternating minimization over the pair `(X, Y)` — the
//!   Y-block has a water-filling closed form in the left singular basis of
//!   `X`, the X-block is a per-column ridge system solved by conjugate
//!   gradients.  A Ky-Fan dual bound certifies the gap.
//! * A stabilized cutting-plane loop (in-out): oracle cuts are collected at
//!   points blended between the master argmin and a stabilization point, and
//!   the master problem is solved by projected subgradient with a certified
//!   simplex-weight lower bound.
//!
//! Both report lower bounds that are valid for the original projection
//! -constrained problem as well, since every cut underestimates `f` on the
//! whole hull.

mod am;
mod inout;
mod master;

pub use am::{am_x_step, am_y_step, solve_relaxation_am, AmReport, AmSolution, AmState, XStep};
pub use inout::{solve_relaxation_inout, InOutSolution, InOutStatus};
pub use master::{relaxed_master, MasterBound, MasterWarmth};
// Hull points live in spectra-core (the hull projection returns them); this
// crate is their natural home conceptually, so re-export.
pub use spectra_core::RelaxedY;

use nalgebra::DMatrix;
use oracle::OracleError;
use problem_model::RankProblem;
use spectra_core::{svd_thin, SpectraError};

#[derive(Debug, thiserror::Error)]
pub enum RelaxError {
    /// The alternating method needs the completion quadratic (per-column
    /// linear X-steps); the sensor payload goes through the in-out path.
    #[error("{0} supports only matrix-completion payloads")]
    UnsupportedPayload(&'static str),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Globally valid lower bound on the relaxation optimum from any dual
/// witness: `h(alpha) - sum_{i<=k} max(q_i - lambda, 0)` with `q_i` the
/// descending eigenvalues of `(gamma/2) alpha alpha^T`.  The subtracted term
/// is the hull support function of `-(gamma/2) alpha alpha^T + lambda I`, so
/// the bound holds for every `alpha`; it is tight at the saddle point when
/// the k-th and (k+1)-th eigenvalues separate.
pub fn am_dual_bound(
    problem: &RankProblem,
    alpha: &DMatrix<f64>,
    k: usize,
    lambda: f64,
    gamma: f64,
) -> Result<f64, RelaxError> {
    let h = oracle::h_of_alpha(problem, alpha)?;
    if h == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let mut q: Vec<f64> = svd_thin(alpha)?
        .sigma
        .iter()
        .map(|s| 0.5 * gamma * s * s)
        .collect();
    q.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let ky_fan: f64 = q.iter().take(k).map(|qi| (qi - lambda).max(0.0)).sum();
    Ok(h - ky_fan)
}
