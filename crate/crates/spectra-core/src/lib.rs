//! Dense symmetric-matrix primitives shared by every solver in the workspace:
//! eigendecomposition with a deterministic basis convention, Euclidean
//! projections onto spectral sets (capped simplex, convex hull of bounded-trace
//! projection matrices), and rank identities used as test utilities.

mod eig;
mod proj;
mod rank;
mod simplex;
mod svd;
mod sym;

pub use eig::{eig_sym, EigenPair};
pub use proj::{project_conv_y, ProjectionMatrix, RelaxedY};
pub use rank::{check_guttman, nuclear_norm, numerical_rank, pseudo_inverse, RANK_THRESHOLD};
pub use simplex::{project_capped_simplex, CappedSimplexSpec};
pub use svd::{svd_thin, ThinSvd};
pub use sym::SymMatrix;

#[derive(Debug, thiserror::Error)]
pub enum SpectraError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
