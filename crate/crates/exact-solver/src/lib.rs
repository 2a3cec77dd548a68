//! Certifiable optimization over projection sets by outer approximation:
//! a complete rank-one master search, a certified-bound fallback for higher
//! ranks, and the cut loop that drives them to an eps-optimal sandwich.

mod interval;
mod master;
mod oa;

pub use interval::sphere_box_quad_min;
pub use master::{master_solve_heuristic, master_solve_k1, HeuristicMaster, K1Master};
pub use oa::{solve_exact, OaLimits, OaReport, OaStatus};

#[derive(Debug, thiserror::Error)]
pub enum ExactError {
    #[error("master called with an empty cut pool")]
    EmptyPool,
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Relax(#[from] relaxation::RelaxError),
    #[error(transparent)]
    Spectra(#[from] spectra_core::SpectraError),
}
