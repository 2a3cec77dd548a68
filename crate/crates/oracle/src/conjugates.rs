//! Closed forms for the regularizer conjugates that appear when the loss is
//! linearized, plus the penalty the trace price induces on singular values.

use nalgebra::DMatrix;
use spectra_core::{nuclear_norm, svd_thin, SymMatrix};

/// Value of `min_X (1/2gamma) ||Y X Y'||_F^2 + <A, Y X Y'>`, which collapses
/// to `-(gamma/2) tr(Y A Y' A^T)`.  Bilinear in `(Y, Y')`, so it extends from
/// projections to their convex hulls by linearity.
pub fn conj_frobenius(a: &DMatrix<f64>, y: &SymMatrix, y_right: &SymMatrix, gamma: f64) -> f64 {
    assert!(gamma > 0.0, "gamma must be positive");
    assert_eq!(y.n(), a.nrows(), "left hull point must match rows of A");
    assert_eq!(y_right.n(), a.ncols(), "right hull point must match cols of A");
    -0.5 * gamma * (y.mat() * a * y_right.mat() * a.transpose()).trace()
}

/// Spectral counterpart: `-M ||Y A Y'||_*`.  No closed form survives the
/// inner solve here, which is why the evaluation oracle refuses the spectral
/// regularizer; the value itself is still useful for bound experiments.
pub fn conj_spectral_value(
    a: &DMatrix<f64>,
    y: &SymMatrix,
    y_right: &SymMatrix,
    big_m: f64,
) -> f64 {
    assert!(big_m > 0.0, "the spectral bound must be positive");
    assert_eq!(y.n(), a.nrows(), "left hull point must match rows of A");
    assert_eq!(y_right.n(), a.ncols(), "right hull point must match cols of A");
    -big_m * nuclear_norm(&(y.mat() * a * y_right.mat()))
}

/// Reverse-Huber penalty on the singular values: the value of
/// `min_{theta in [0,1]} lambda theta + sigma^2 / (2 gamma theta)` per
/// coordinate.  The interior stationary point `theta = sigma/sqrt(2 lambda
/// gamma)` gives the linear branch `sqrt(2 lambda/gamma) sigma`; once it
/// would exceed 1 the budget pins at `theta = 1` and the quadratic branch
/// `lambda + sigma^2/(2 gamma)` takes over.  Both equal `2 lambda` at the
/// breakpoint `sigma = sqrt(2 lambda gamma)`.  Note the branch is selected
/// by the region, not by a pointwise min: the quadratic branch dominates the
/// linear one everywhere (their difference is a square), so a literal min
/// would collapse to the linear branch and lose the variational identity.
pub fn reverse_huber_penalty(x: &DMatrix<f64>, lambda: f64, gamma: f64) -> f64 {
    assert!(lambda >= 0.0 && gamma > 0.0, "prices must be nonnegative");
    let breakpoint = (2.0 * lambda * gamma).sqrt();
    let svd = svd_thin(x).expect("finite matrix");
    svd.sigma
        .iter()
        .map(|&s| {
            if s <= breakpoint {
                (2.0 * lambda / gamma).sqrt() * s
            } else {
                lambda + s * s / (2.0 * gamma)
            }
        })
        .sum()
}
