use nalgebra::{DMatrix, DVector};

use crate::SpectraError;

/// Thin singular value decomposition `X = U diag(sigma) V^T` with `sigma`
/// descending, length `min(n, m)`. When a singular value is exactly zero its
/// `u`/`v` columns are zero vectors rather than an arbitrary orthonormal
/// completion; callers filter on `sigma` before touching the bases.
#[derive(Clone, Debug)]
pub struct ThinSvd {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl ThinSvd {
    /// Rebuilds `U diag(sigma) V^T`.
    pub fn reassemble(&self) -> DMatrix<f64> {
        let mut scaled = self.u.clone();
        for j in 0..self.sigma.len() {
            scaled.column_mut(j).scale_mut(self.sigma[j]);
        }
        scaled * self.v.transpose()
    }
}

/// One-sided (Hestenes) Jacobi SVD: Givens rotations orthogonalize the column
/// pairs of `X` in a fixed cyclic order; column norms of the rotated matrix
/// are the singular values and the accumulated rotations form `V`. Chosen
/// over QR-style solvers for the same reason as the Jacobi eigensolver — the
/// factor pairing stays accurate on clustered spectra, and the sweep order
/// makes the output a deterministic function of the input bits.
pub fn svd_thin(x: &DMatrix<f64>) -> Result<ThinSvd, SpectraError> {
    if x.iter().any(|e| !e.is_finite()) {
        return Err(SpectraError::InvalidInput("non-finite matrix entries".into()));
    }
    if x.nrows() < x.ncols() {
        let t = svd_thin(&x.transpose())?;
        return Ok(ThinSvd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let n = x.nrows();
    let m = x.ncols();
    let mut w = x.clone();
    let mut v = DMatrix::<f64>::identity(m, m);

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut g = 0.0;
                for i in 0..n {
                    alpha += w[(i, p)] * w[(i, p)];
                    beta += w[(i, q)] * w[(i, q)];
                    g += w[(i, p)] * w[(i, q)];
                }
                if g.abs() <= 1e-15 * (alpha * beta).sqrt() || g.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.abs() > 1e154 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + zeta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for i in 0..n {
                    let wip = w[(i, p)];
                    let wiq = w[(i, q)];
                    w[(i, p)] = c * wip - s * wiq;
                    w[(i, q)] = s * wip + c * wiq;
                }
                for i in 0..m {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..m).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap().then(a.cmp(&b)));

    let mut u = DMatrix::<f64>::zeros(n, m);
    let mut vv = DMatrix::<f64>::zeros(m, m);
    let mut sigma = DVector::<f64>::zeros(m);
    for (dst, &src) in order.iter().enumerate() {
        let nrm = norms[src];
        sigma[dst] = nrm;
        // Sign convention mirrors eig_sym: the first significant component of
        // the u column comes out nonnegative; v flips with it so the product
        // is unchanged. Zero columns apply the convention to v instead.
        let mut flip = false;
        if nrm > 0.0 {
            let col = w.column(src);
            let sign_tol = 1e-12 * col.amax();
            for i in 0..n {
                if col[i].abs() > sign_tol {
                    flip = col[i] < 0.0;
                    break;
                }
            }
            let factor = (if flip { -1.0 } else { 1.0 }) / nrm;
            for i in 0..n {
                u[(i, dst)] = factor * col[i];
            }
        } else {
            let col = v.column(src);
            let sign_tol = 1e-12 * col.amax();
            for i in 0..m {
                if col[i].abs() > sign_tol {
                    flip = col[i] < 0.0;
                    break;
                }
            }
        }
        let factor = if flip { -1.0 } else { 1.0 };
        for i in 0..m {
            vv[(i, dst)] = factor * v[(i, src)];
        }
    }
    Ok(ThinSvd { u, sigma, v: vv })
}
