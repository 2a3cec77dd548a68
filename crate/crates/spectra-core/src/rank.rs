use nalgebra::DMatrix;

use crate::svd::svd_thin;

/// Relative singular-value cutoff shared by every rank decision in the
/// workspace, so "rank" means the same thing in tests and solvers.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Number of singular values above `RANK_THRESHOLD` relative to the largest.
pub fn numerical_rank(x: &DMatrix<f64>) -> usize {
    if x.nrows() == 0 || x.ncols() == 0 {
        return 0;
    }
    let sv = svd_thin(x).expect("finite matrix").sigma;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * smax).count()
}

/// Sum of singular values.
pub fn nuclear_norm(x: &DMatrix<f64>) -> f64 {
    if x.nrows() == 0 || x.ncols() == 0 {
        return 0.0;
    }
    svd_thin(x).expect("finite matrix").sigma.iter().sum()
}

/// Moore-Penrose inverse with singular values below `RANK_THRESHOLD * smax`
/// treated as zero.
pub fn pseudo_inverse(x: &DMatrix<f64>) -> DMatrix<f64> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return DMatrix::zeros(x.ncols(), x.nrows());
    }
    let svd = svd_thin(x).expect("finite matrix");
    let smax = svd.sigma.iter().cloned().fold(0.0, f64::max);
    let mut scaled = svd.v.clone();
    for j in 0..svd.sigma.len() {
        let s = svd.sigma[j];
        let inv = if smax > 0.0 && s > RANK_THRESHOLD * smax { 1.0 / s } else { 0.0 };
        scaled.column_mut(j).scale_mut(inv);
    }
    scaled * svd.u.transpose()
}

/// Singular values above `RANK_THRESHOLD` relative to a caller-provided
/// scale. Rank identities over sub-blocks need this: a block that is zero up
/// to rounding has self-relative rank >= 1 (its own largest singular value is
/// the noise), so every rank in the identity must be measured against the
/// parent matrix's scale.
fn rank_at_scale(x: &DMatrix<f64>, scale: f64) -> usize {
    if x.nrows() == 0 || x.ncols() == 0 || scale == 0.0 {
        return 0;
    }
    let sv = svd_thin(x).expect("finite matrix").sigma;
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * scale).count()
}

/// Rank additivity across a 2x2 block partition: for `M = [[A, B], [B^T, C]]`
/// with `B`'s columns in the range of `A` (automatic when `M` is positive
/// semidefinite), `rank(M) = rank(A) + rank(C - B^T A^+ B)`.
pub fn check_guttman(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> bool {
    assert_eq!(a.nrows(), a.ncols(), "A must be square");
    assert_eq!(c.nrows(), c.ncols(), "C must be square");
    assert_eq!(b.nrows(), a.nrows(), "B rows must match A");
    assert_eq!(b.ncols(), c.ncols(), "B cols must match C");
    let na = a.nrows();
    let nc = c.nrows();
    let mut full = DMatrix::zeros(na + nc, na + nc);
    full.view_mut((0, 0), (na, na)).copy_from(a);
    full.view_mut((0, na), (na, nc)).copy_from(b);
    full.view_mut((na, 0), (nc, na)).copy_from(&b.transpose());
    full.view_mut((na, na), (nc, nc)).copy_from(c);
    let scale = if full.nrows() == 0 {
        0.0
    } else {
        svd_thin(&full).expect("finite matrix").sigma[0]
    };
    let schur = c - b.transpose() * pseudo_inverse(a) * b;
    rank_at_scale(&full, scale) == rank_at_scale(a, scale) + rank_at_scale(&schur, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_blocks_add_ranks() {
        let i = DMatrix::identity(2, 2);
        let z = DMatrix::zeros(2, 2);
        assert!(check_guttman(&i, &z, &i));
    }

    #[test]
    fn rank_one_outer_product_splits() {
        // M = vv^T with v = (1, x): rank 1 total, rank 1 in A, rank 0 Schur.
        let x = 0.75;
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let b = DMatrix::from_row_slice(1, 1, &[x]);
        let c = DMatrix::from_row_slice(1, 1, &[x * x]);
        assert!(check_guttman(&a, &b, &c));

        let mut full = DMatrix::zeros(2, 2);
        full.view_mut((0, 0), (1, 1)).copy_from(&a);
        full.view_mut((0, 1), (1, 1)).copy_from(&b);
        full.view_mut((1, 0), (1, 1)).copy_from(&b.transpose());
        full.view_mut((1, 1), (1, 1)).copy_from(&c);
        assert_eq!(numerical_rank(&full), 1);
    }

    #[test]
    fn nuclear_norm_of_identity() {
        assert!((nuclear_norm(&DMatrix::identity(3, 3)) - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn nuclear_norm_of_unit_outer_product() {
        let u = DMatrix::from_row_slice(3, 1, &[0.6, 0.8, 0.0]);
        let v = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let x = &u * v.transpose();
        assert!((nuclear_norm(&x) - 1.0).abs() <= 1e-12);
    }
}
