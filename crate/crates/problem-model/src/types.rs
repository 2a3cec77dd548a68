use std::collections::HashSet;

use nalgebra::DMatrix;
use spectra_core::SymMatrix;

use crate::ModelError;

/// Strongly convex term added to the loss. Solvers in this workspace handle
/// the Frobenius kind; the spectral kind is carried for data-model
/// completeness and rejected at solve time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regularizer {
    /// Ω(X) = (1/2γ)‖X‖_F².
    Frobenius { gamma: f64 },
    /// Ω = indicator of a spectral-norm ball of radius big_m (informational).
    Spectral { big_m: f64 },
}

impl Regularizer {
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            Regularizer::Frobenius { gamma } => {
                if gamma.is_finite() && gamma > 0.0 {
                    Ok(())
                } else {
                    Err(ModelError::InvalidParameter(format!(
                        "gamma must be finite and positive, got {gamma}"
                    )))
                }
            }
            Regularizer::Spectral { big_m } => {
                if big_m.is_finite() && big_m > 0.0 {
                    Ok(())
                } else {
                    Err(ModelError::InvalidParameter(format!(
                        "bigM must be finite and positive, got {big_m}"
                    )))
                }
            }
        }
    }

    /// Frobenius weight, if this is the Frobenius kind.
    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Regularizer::Frobenius { gamma } => Some(gamma),
            Regularizer::Spectral { .. } => None,
        }
    }
}

/// Partially observed n×m matrix: entries `values[t]` at positions
/// `omega[t]`, with an optional dense ground truth for recovery metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCompletionInstance {
    pub n: usize,
    pub m: usize,
    pub omega: Vec<(usize, usize)>,
    pub values: Vec<f64>,
    pub ground_truth: Option<DMatrix<f64>>,
}

impl MatrixCompletionInstance {
    pub fn new(
        n: usize,
        m: usize,
        omega: Vec<(usize, usize)>,
        values: Vec<f64>,
        ground_truth: Option<DMatrix<f64>>,
    ) -> Result<Self, ModelError> {
        if n == 0 || m == 0 {
            return Err(ModelError::InvalidParameter("dimensions must be positive".into()));
        }
        if omega.is_empty() {
            return Err(ModelError::EmptyObservations);
        }
        if omega.len() != values.len() {
            return Err(ModelError::InvalidParameter(format!(
                "{} indices vs {} values",
                omega.len(),
                values.len()
            )));
        }
        let mut seen = HashSet::with_capacity(omega.len());
        for &(i, j) in &omega {
            if i >= n || j >= m {
                return Err(ModelError::InvalidParameter(format!(
                    "observation ({i}, {j}) out of range for {n}x{m}"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(ModelError::InvalidParameter(format!(
                    "duplicate observation at ({i}, {j})"
                )));
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(ModelError::InvalidParameter(format!("non-finite observation {v}")));
        }
        if let Some(gt) = &ground_truth {
            if gt.nrows() != n || gt.ncols() != m {
                return Err(ModelError::InvalidParameter(
                    "ground truth dimensions do not match".into(),
                ));
            }
        }
        Ok(MatrixCompletionInstance { n, m, omega, values, ground_truth })
    }

    /// Observed entries as (row, col, value) triples.
    pub fn observed(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.omega.iter().zip(&self.values).map(|(&(i, j), &v)| (i, j, v))
    }

    /// Observations grouped by column: entry `j` lists the (row, value) pairs
    /// observed in column j. Solvers that work column-by-column start here.
    pub fn by_column(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = vec![Vec::new(); self.m];
        for (i, j, v) in self.observed() {
            cols[j].push((i, v));
        }
        cols
    }

    /// Σ_Ω A_{i,j}² — the objective value of X = 0.
    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Pairwise squared-distance observations for n points in dim_k dimensions;
/// `dist_sq` holds (i, j, D_{i,j}) with i < j for pairs within radio range.
/// The optional ground truth is the Gram matrix of the centered true
/// positions (distances pin the Gram down only up to translation; the
/// trace-penalized solution is the centered one).
#[derive(Clone, Debug, PartialEq)]
pub struct SensorInstance {
    pub n: usize,
    pub dim_k: usize,
    pub radio_range: f64,
    pub dist_sq: Vec<(usize, usize, f64)>,
    pub lambda_slack: f64,
    pub trace_weight: f64,
    pub ground_truth: Option<DMatrix<f64>>,
}

impl SensorInstance {
    pub fn new(
        n: usize,
        dim_k: usize,
        radio_range: f64,
        dist_sq: Vec<(usize, usize, f64)>,
        lambda_slack: f64,
        trace_weight: f64,
        ground_truth: Option<DMatrix<f64>>,
    ) -> Result<Self, ModelError> {
        if n < 2 || dim_k == 0 {
            return Err(ModelError::InvalidParameter(
                "need at least two points and one dimension".into(),
            ));
        }
        if !(radio_range.is_finite() && radio_range > 0.0) {
            return Err(ModelError::InvalidParameter(format!("bad radio range {radio_range}")));
        }
        if dist_sq.is_empty() {
            return Err(ModelError::EmptyObservations);
        }
        let mut seen = HashSet::with_capacity(dist_sq.len());
        for &(i, j, d) in &dist_sq {
            if i >= j || j >= n {
                return Err(ModelError::InvalidParameter(format!(
                    "pair ({i}, {j}) must satisfy i < j < {n}"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(ModelError::InvalidParameter(format!("duplicate pair ({i}, {j})")));
            }
            if !(d.is_finite() && d >= 0.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "distance² for ({i}, {j}) must be finite and nonnegative, got {d}"
                )));
            }
        }
        for (name, v) in [("lambda_slack", lambda_slack), ("trace_weight", trace_weight)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ModelError::InvalidParameter(format!("bad {name}: {v}")));
            }
        }
        if let Some(gt) = &ground_truth {
            if gt.nrows() != n || gt.ncols() != n {
                return Err(ModelError::InvalidParameter(
                    "ground truth Gram dimensions do not match".into(),
                ));
            }
        }
        Ok(SensorInstance {
            n,
            dim_k,
            radio_range,
            dist_sq,
            lambda_slack,
            trace_weight,
            ground_truth,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Completion(MatrixCompletionInstance),
    Sensor(SensorInstance),
}

impl Payload {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Payload::Completion(c) => (c.n, c.m),
            Payload::Sensor(s) => (s.n, s.n),
        }
    }

    pub fn completion(&self) -> Option<&MatrixCompletionInstance> {
        match self {
            Payload::Completion(c) => Some(c),
            Payload::Sensor(_) => None,
        }
    }

    pub fn sensor(&self) -> Option<&SensorInstance> {
        match self {
            Payload::Sensor(s) => Some(s),
            Payload::Completion(_) => None,
        }
    }
}

/// A rank-bounded estimation problem: minimize loss + Ω over n×m matrices of
/// rank at most k, with rank priced at λ per unit of trace of the projection
/// variable.
#[derive(Clone, Debug, PartialEq)]
pub struct RankProblem {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub lambda: f64,
    pub reg: Regularizer,
    pub payload: Payload,
}

impl RankProblem {
    pub fn new(
        k: usize,
        lambda: f64,
        reg: Regularizer,
        payload: Payload,
    ) -> Result<Self, ModelError> {
        let (n, m) = payload.dims();
        if k == 0 || k > n.min(m) {
            return Err(ModelError::InvalidParameter(format!(
                "k = {k} out of range for {n}x{m}"
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(ModelError::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
        }
        reg.validate()?;
        Ok(RankProblem { n, m, k, lambda, reg, payload })
    }

    pub fn gamma(&self) -> Option<f64> {
        self.reg.gamma()
    }
}

/// Affine underestimator exchanged between oracle and master problems:
/// `z·f(Y) ≥ h + ⟨grad, Y − yhat⟩` (z = true for optimality cuts; the
/// feasibility kind z = false is carried for model completeness but never
/// produced — both payloads admit X = 0 for every Y).
#[derive(Clone, Debug)]
pub struct Cut {
    pub z: bool,
    pub h: f64,
    pub grad: SymMatrix,
    pub yhat: SymMatrix,
}

impl Cut {
    /// Right-hand side h + ⟨grad, Y − yhat⟩ evaluated at Y.
    pub fn value_at(&self, y: &SymMatrix) -> f64 {
        self.h + self.grad.inner(y) - self.grad.inner(&self.yhat)
    }

    /// Constant term when the cut is written as `offset + ⟨grad, Y⟩`.
    pub fn offset(&self) -> f64 {
        self.h - self.grad.inner(&self.yhat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completion_rejects_duplicates_and_range() {
        let err = MatrixCompletionInstance::new(2, 2, vec![(0, 0), (0, 0)], vec![1.0, 2.0], None);
        assert!(err.is_err());
        let err = MatrixCompletionInstance::new(2, 2, vec![(2, 0)], vec![1.0], None);
        assert!(err.is_err());
    }

    #[test]
    fn rank_problem_bounds_k() {
        let inst =
            MatrixCompletionInstance::new(3, 2, vec![(0, 0)], vec![1.0], None).unwrap();
        let reg = Regularizer::Frobenius { gamma: 1.0 };
        assert!(RankProblem::new(3, 0.0, reg, Payload::Completion(inst.clone())).is_err());
        assert!(RankProblem::new(2, 0.0, reg, Payload::Completion(inst)).is_ok());
    }

    #[test]
    fn cut_value_matches_hand_expansion() {
        // Scalar cut f(Y) >= 0.5 - 0.25 (Y - 1): value 0.75 at Y = 0.
        let cut = Cut {
            z: true,
            h: 0.5,
            grad: SymMatrix::from_diagonal(&[-0.25]),
            yhat: SymMatrix::from_diagonal(&[1.0]),
        };
        let at_zero = cut.value_at(&SymMatrix::zeros(1));
        assert!((at_zero - 0.75).abs() <= 1e-15);
        assert!((cut.offset() - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn sensor_requires_ordered_pairs() {
        assert!(SensorInstance::new(3, 2, 1.0, vec![(1, 0, 0.5)], 1.0, 1.0, None).is_err());
        assert!(SensorInstance::new(3, 2, 1.0, vec![(0, 1, 0.5)], 1.0, 1.0, None).is_ok());
    }
}
