//! Inner-problem oracle: given a candidate `Y` (a projection or a point of
//! its convex hull), evaluate
//!
//! ```text
//!     f(Y) = min_X  g(X) + (1/2gamma) <X X^T, Y^+>   s.t.  X = Y X
//! ```
//!
//! together with an optimal dual witness `alpha`, the matching dual value,
//! and a linear minorant (cut) of `f` anchored at `Y`.  `f` is a pointwise
//! maximum of functions affine in `Y`, so the cut
//! `f(Y') >= h + <grad, Y' - Y>` is valid for every `Y'` with `0 <= Y' <= I`.

mod completion;
mod conjugates;
mod sensor;

pub use conjugates::{conj_frobenius, conj_spectral_value, reverse_huber_penalty};

use nalgebra::DMatrix;
use problem_model::{Cut, Payload, RankProblem, Regularizer};
use spectra_core::{eig_sym, ProjectionMatrix, RelaxedY, SymMatrix};

/// Eigenvalues of a relaxed `Y` at or below this are treated as exactly zero:
/// the corresponding directions are excluded from the range of `Y` and `X` is
/// confined to the surviving eigenspace.
pub const RELAXED_EIG_FLOOR: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    /// Only the Frobenius regularizer admits the closed-form inner solve.
    #[error("oracle supports only the Frobenius regularizer")]
    UnsupportedRegularizer,
    /// A per-column normal system failed to factor.  With gamma finite the
    /// system is positive definite, so this indicates corrupted input.
    #[error("singular normal system in inner solve")]
    SingularSystem,
    /// Feasibility cuts (z = 0) exist in the data model but are never
    /// produced here: the inner problem is feasible for every Y in the hull.
    #[error("feasibility cuts are not supported")]
    UnsupportedCut,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// The argument of `f`: either an exact projection (given by an orthonormal
/// factor) or a relaxed point `0 <= Y <= I`.
#[derive(Debug, Clone)]
pub enum OracleY {
    Projection(ProjectionMatrix),
    Relaxed(RelaxedY),
}

impl OracleY {
    pub fn n(&self) -> usize {
        match self {
            OracleY::Projection(p) => p.n(),
            OracleY::Relaxed(y) => y.n(),
        }
    }

    pub fn to_sym(&self) -> SymMatrix {
        match self {
            OracleY::Projection(p) => p.to_sym(),
            OracleY::Relaxed(y) => y.sym().clone(),
        }
    }

    /// Orthonormal basis `q` of the (numerical) range of `Y` and the
    /// eigenvalue attached to each basis column.  Projections report unit
    /// eigenvalues; relaxed points drop everything at or below
    /// [`RELAXED_EIG_FLOOR`].
    pub(crate) fn basis(&self) -> (DMatrix<f64>, Vec<f64>) {
        match self {
            OracleY::Projection(p) => {
                let q = p.factor().clone();
                let s = vec![1.0; q.ncols()];
                (q, s)
            }
            OracleY::Relaxed(y) => {
                let pair = eig_sym(y.sym()).expect("relaxed Y is finite");
                let keep: Vec<usize> = (0..pair.values.len())
                    .filter(|&l| pair.values[l] > RELAXED_EIG_FLOOR)
                    .collect();
                let n = y.n();
                let mut q = DMatrix::zeros(n, keep.len());
                let mut s = Vec::with_capacity(keep.len());
                for (col, &l) in keep.iter().enumerate() {
                    q.set_column(col, &pair.vectors.column(l));
                    s.push(pair.values[l]);
                }
                (q, s)
            }
        }
    }
}

impl From<ProjectionMatrix> for OracleY {
    fn from(p: ProjectionMatrix) -> Self {
        OracleY::Projection(p)
    }
}

impl From<RelaxedY> for OracleY {
    fn from(y: RelaxedY) -> Self {
        OracleY::Relaxed(y)
    }
}

/// Everything the outer loops need from one inner solve.
///
/// Invariants (checked by the property suite, not at runtime):
/// `|fval - dual_val| <= 1e-6 (1 + |fval|)`, the cut underestimates `f`
/// everywhere on the hull, and for matrix completion `alpha` vanishes off
/// the observed set.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub fval: f64,
    pub xstar: DMatrix<f64>,
    pub alpha: DMatrix<f64>,
    pub cut: Cut,
    pub dual_val: f64,
}

pub fn eval_f(problem: &RankProblem, y: &OracleY) -> Result<OracleResult, OracleError> {
    let gamma = match problem.reg {
        Regularizer::Frobenius { gamma } => gamma,
        Regularizer::Spectral { .. } => return Err(OracleError::UnsupportedRegularizer),
    };
    if y.n() != problem.n {
        return Err(OracleError::Dimension(format!(
            "Y is {}x{} but the problem has n = {}",
            y.n(),
            y.n(),
            problem.n
        )));
    }
    match &problem.payload {
        Payload::Completion(inst) => completion::eval(inst, gamma, y),
        Payload::Sensor(inst) => sensor::eval(inst, gamma, y),
    }
}

/// Package the optimality cut from a finished solve.  `yhat` must be the
/// point at which the result was produced; the cut is the affine minorant
/// the solve certified there.  Feasibility cuts (z = 0) exist in the data
/// model but cannot be added: the inner problem is always feasible.
pub fn make_cut(result: &OracleResult, yhat: &SymMatrix) -> Result<Cut, OracleError> {
    if !result.cut.z {
        return Err(OracleError::UnsupportedCut);
    }
    debug_assert!(
        (yhat.mat() - result.cut.yhat.mat()).norm() <= 1e-9 * (1.0 + yhat.norm()),
        "cut must be anchored where the oracle was evaluated"
    );
    Ok(Cut {
        z: true,
        h: result.cut.h,
        grad: result.cut.grad.clone(),
        yhat: yhat.clone(),
    })
}

/// Concave dual objective `h(alpha) = min_V g(V) - <V, alpha>`.
///
/// Returns `f64::NEG_INFINITY` when `alpha` lies outside the domain: for
/// matrix completion that is any mass off the observed set, for the sensor
/// payload any component outside the span of the measurement matrices (or a
/// pair coefficient beyond the slack price).
pub fn h_of_alpha(problem: &RankProblem, alpha: &DMatrix<f64>) -> Result<f64, OracleError> {
    if let Regularizer::Spectral { .. } = problem.reg {
        return Err(OracleError::UnsupportedRegularizer);
    }
    let (n, m) = problem.payload.dims();
    if alpha.nrows() != n || alpha.ncols() != m {
        return Err(OracleError::Dimension(format!(
            "alpha is {}x{}, expected {}x{}",
            alpha.nrows(),
            alpha.ncols(),
            n,
            m
        )));
    }
    match &problem.payload {
        Payload::Completion(inst) => Ok(completion::h_of_alpha(inst, alpha)),
        Payload::Sensor(inst) => Ok(sensor::h_of_alpha(inst, alpha)),
    }
}
