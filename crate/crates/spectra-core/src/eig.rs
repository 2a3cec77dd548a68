use nalgebra::{DMatrix, DVector};

use crate::{SpectraError, SymMatrix};

/// Eigendecomposition `M = V diag(values) V^T` with descending eigenvalues and
/// orthonormal columns in `vectors`.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenPair {
    /// Rebuilds `V diag(values) V^T`.
    pub fn reassemble(&self) -> SymMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = self.values[j];
            scaled.column_mut(j).scale_mut(s);
        }
        SymMatrix::new(&scaled * self.vectors.transpose())
    }

    /// Rebuilds `V diag(f(values)) V^T` for a remapped spectrum.
    pub fn reassemble_with(&self, spectrum: &[f64]) -> SymMatrix {
        assert_eq!(spectrum.len(), self.values.len());
        let mut scaled = self.vectors.clone();
        for (j, &s) in spectrum.iter().enumerate() {
            scaled.column_mut(j).scale_mut(s);
        }
        SymMatrix::new(&scaled * self.vectors.transpose())
    }
}

/// Cyclic Jacobi diagonalization. Rotations are applied in a fixed sweep order
/// and accumulated into `v`, so the output is a deterministic function of the
/// input bits. Unlike QR-style solvers, Jacobi keeps eigenvectors paired with
/// their eigenvalues to machine precision even on degenerate spectra, which
/// matters here: projector-like matrices with repeated {0, 1} eigenvalues are
/// the common case in this workspace.
fn jacobi(mut a: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = a.norm();
    if norm == 0.0 {
        return (DVector::zeros(n), v);
    }
    let tol = 1e-15 * norm;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e154 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = c * aip - s * aiq;
                        a[(i, q)] = s * aip + c * aiq;
                        a[(p, i)] = a[(i, p)];
                        a[(q, i)] = a[(i, q)];
                    }
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }
    (a.diagonal(), v)
}

/// Symmetric eigendecomposition, sorted by descending eigenvalue.
///
/// The basis is made deterministic by a sign convention: within each
/// eigenvector, the first component whose magnitude exceeds `1e-12` times the
/// vector's max-norm is flipped to be nonnegative. Ties between equal
/// eigenvalues keep the sweep's ordering, so two calls on bitwise-identical
/// input produce bitwise-identical output.
pub fn eig_sym(m: &SymMatrix) -> Result<EigenPair, SpectraError> {
    if !m.is_finite() {
        return Err(SpectraError::InvalidInput("non-finite matrix entries".into()));
    }
    let n = m.n();
    if n == 0 {
        return Ok(EigenPair { values: DVector::zeros(0), vectors: DMatrix::zeros(0, 0) });
    }
    let (raw_values, raw_vectors) = jacobi(m.mat().clone());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        raw_values[b].partial_cmp(&raw_values[a]).unwrap().then(a.cmp(&b))
    });

    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = raw_values[src];
        let col = raw_vectors.column(src);
        let max_abs = col.amax();
        let sign_tol = 1e-12 * max_abs;
        let mut flip = false;
        for i in 0..n {
            if col[i].abs() > sign_tol {
                flip = col[i] < 0.0;
                break;
            }
        }
        let factor = if flip { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, dst)] = factor * col[i];
        }
    }
    Ok(EigenPair { values, vectors })
}
