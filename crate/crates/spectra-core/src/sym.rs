use nalgebra::DMatrix;

/// Dense symmetric matrix. Construction averages `M` with its transpose, so
/// the stored entries satisfy `M == M^T` exactly (not just within tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    /// Wraps a square matrix, symmetrizing it as `(M + M^T)/2`.
    ///
    /// Panics if `m` is not square.
    pub fn new(m: DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "SymMatrix requires a square matrix");
        let sym = (&m + m.transpose()) * 0.5;
        SymMatrix { m: sym }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix { m: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix { m: DMatrix::identity(n, n) }
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        SymMatrix { m }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Frobenius inner product `<A, B> = tr(A B)` (entrywise dot product for
    /// symmetric arguments).
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        self.m.dot(&other.m)
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|x| x.is_finite())
    }
}
