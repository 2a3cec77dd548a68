use nalgebra::{DMatrix, DVector};

use crate::{eig_sym, project_capped_simplex, CappedSimplexSpec, SpectraError, SymMatrix};

/// Orthogonal projection matrix `Y = U U^T`, stored as its orthonormal factor
/// `U` (n x r). The rank-0 case (`Y = 0`) is an n x 0 factor.
#[derive(Clone, Debug)]
pub struct ProjectionMatrix {
    u: DMatrix<f64>,
}

impl ProjectionMatrix {
    /// Wraps an n x r factor; requires `||U^T U - I||_F <= 1e-8`.
    pub fn from_factor(u: DMatrix<f64>) -> Result<Self, SpectraError> {
        if u.iter().any(|x| !x.is_finite()) {
            return Err(SpectraError::InvalidInput("non-finite factor entries".into()));
        }
        let r = u.ncols();
        let gram = u.transpose() * &u;
        let resid = (&gram - DMatrix::identity(r, r)).norm();
        if resid > 1e-8 {
            return Err(SpectraError::InvalidInput(format!(
                "factor columns not orthonormal (||U^T U - I|| = {resid:.3e})"
            )));
        }
        Ok(ProjectionMatrix { u })
    }

    /// The zero projection on `R^n`.
    pub fn zero(n: usize) -> Self {
        ProjectionMatrix { u: DMatrix::zeros(n, 0) }
    }

    pub fn identity(n: usize) -> Self {
        ProjectionMatrix { u: DMatrix::identity(n, n) }
    }

    /// Rank-1 projection onto the span of a unit vector.
    pub fn from_unit_vector(u: DVector<f64>) -> Result<Self, SpectraError> {
        let norm = u.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-8 {
            return Err(SpectraError::InvalidInput(format!("vector norm {norm} is not 1")));
        }
        let n = u.len();
        Ok(ProjectionMatrix { u: DMatrix::from_column_slice(n, 1, u.as_slice()) })
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn rank(&self) -> usize {
        self.u.ncols()
    }

    /// tr(Y) = rank(Y) for a projection matrix.
    pub fn trace(&self) -> f64 {
        self.rank() as f64
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn to_sym(&self) -> SymMatrix {
        SymMatrix::new(&self.u * self.u.transpose())
    }
}

/// Element of `Conv(Y_n^k) = {Y symmetric : 0 <= Y <= I, tr(Y) <= k}`.
#[derive(Clone, Debug)]
pub struct RelaxedY {
    m: SymMatrix,
}

impl RelaxedY {
    /// Validates eigenvalues within `[-1e-8, 1 + 1e-8]` and `tr <= k + 1e-8`.
    pub fn new(m: SymMatrix, k: usize) -> Result<Self, SpectraError> {
        let ep = eig_sym(&m)?;
        let lo = ep.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ep.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m.n() > 0 && (lo < -1e-8 || hi > 1.0 + 1e-8) {
            return Err(SpectraError::InvalidInput(format!(
                "eigenvalues [{lo:.3e}, {hi:.3e}] outside [0, 1]"
            )));
        }
        if m.trace() > k as f64 + 1e-8 {
            return Err(SpectraError::InvalidInput(format!(
                "trace {} exceeds budget {k}",
                m.trace()
            )));
        }
        Ok(RelaxedY { m })
    }

    /// Wraps a matrix the caller guarantees to satisfy the invariants
    /// (e.g. assembled from an eigenbasis with spectrum already in the set).
    pub fn new_unchecked(m: SymMatrix) -> Self {
        RelaxedY { m }
    }

    pub fn from_projection(p: &ProjectionMatrix) -> Self {
        RelaxedY { m: p.to_sym() }
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.m
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        self.m.mat()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }
}

/// Frobenius projection of a symmetric matrix onto `Conv(Y_n^k)`.
///
/// Eigendecomposes, projects the spectrum onto the capped simplex, and
/// reassembles in the same basis. For this unitarily invariant set the
/// spectral projection is the exact Euclidean projection.
pub fn project_conv_y(m: &SymMatrix, k: usize) -> Result<RelaxedY, SpectraError> {
    if k == 0 {
        return Err(SpectraError::InvalidInput("rank budget k must be >= 1".into()));
    }
    let ep = eig_sym(m)?;
    let spec = CappedSimplexSpec::new(k as f64)?;
    let rho = project_capped_simplex(ep.values.as_slice(), spec)?;
    Ok(RelaxedY { m: ep.reassemble_with(&rho) })
}
