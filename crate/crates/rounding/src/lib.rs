//! Feasible solutions from relaxation output: greedy eigenvalue rounding
//! with an a-priori gap certificate, a factored alternating refinement, and
//! a soft-thresholding baseline for comparisons.

mod bm;
mod greedy;
mod svt;

pub use bm::{burer_monteiro, BmSolution};
pub use greedy::{greedy_round, round_with_certificate, RoundedSolution};
pub use svt::{relative_mse, svt_baseline, svt_best};

#[derive(Debug, thiserror::Error)]
pub enum RoundError {
    /// A factor column collapsed to zero twice (once after reinitialization).
    #[error("factor column collapsed during alternating refinement")]
    DegenerateFactor,
    #[error("instance carries no ground truth to score against")]
    MissingGroundTruth,
    #[error("{0} supports only matrix-completion payloads")]
    UnsupportedPayload(&'static str),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Spectra(#[from] spectra_core::SpectraError),
}
