//! Matrix-completion payload: g(X) = sum over observed (i,j) of (X_ij - A_ij)^2.
//!
//! With `Y = q diag(s) q^T` the inner problem separates over columns.  Column
//! j must lie in range(Y), so `x_j = q c` and the regularizer contributes
//! `sum_l c_l^2 / (2 gamma s_l)`.  Stationarity gives the small ridge system
//!
//! ```text
//!     (q_O^T q_O + diag(1/(2 gamma s))) c = q_O^T a
//! ```
//!
//! over the rows O observed in that column.  The dual witness is
//! `alpha = 2 (X* - A)` on the observed set and the pair satisfies strong
//! duality exactly (both sides solve the same normal system).

use nalgebra::{Cholesky, DMatrix, DVector};
use problem_model::{Cut, MatrixCompletionInstance};
use spectra_core::SymMatrix;

use crate::{OracleError, OracleResult, OracleY};

pub(crate) fn eval(
    inst: &MatrixCompletionInstance,
    gamma: f64,
    y: &OracleY,
) -> Result<OracleResult, OracleError> {
    let (q, s) = y.basis();
    let (n, m, r) = (inst.n, inst.m, q.ncols());

    // diag(1/(2 gamma s_l)): the price of leaning on a weakly-open direction.
    let ridge: Vec<f64> = s.iter().map(|&sl| 1.0 / (2.0 * gamma * sl)).collect();

    let mut xstar = DMatrix::zeros(n, m);
    let mut alpha = DMatrix::zeros(n, m);
    let mut loss = 0.0;
    let mut reg = 0.0;

    for (j, obs) in inst.by_column().iter().enumerate() {
        if obs.is_empty() {
            continue;
        }
        if r > 0 {
            let mut gram = DMatrix::zeros(r, r);
            let mut rhs = DVector::zeros(r);
            for &(i, a) in obs {
                let row = q.row(i).transpose();
                gram.ger(1.0, &row, &row, 1.0);
                rhs.axpy(a, &row, 1.0);
            }
            for l in 0..r {
                gram[(l, l)] += ridge[l];
            }
            let chol = Cholesky::new(gram).ok_or(OracleError::SingularSystem)?;
            let c = chol.solve(&rhs);
            xstar.set_column(j, &(&q * &c));
            for l in 0..r {
                reg += ridge[l] * c[l] * c[l];
            }
        }
        for &(i, a) in obs {
            let d = xstar[(i, j)] - a;
            loss += d * d;
            alpha[(i, j)] = 2.0 * d;
        }
    }
    let fval = loss + reg;

    // <alpha, Y alpha> through the basis: sum_l s_l ||q_l^T alpha||^2.
    let qta = q.transpose() * &alpha;
    let mut coupling = 0.0;
    for l in 0..r {
        coupling += s[l] * qta.row(l).norm_squared();
    }
    let dual_val = h_of_alpha(inst, &alpha) - 0.5 * gamma * coupling;

    let grad = SymMatrix::new(&alpha * alpha.transpose() * (-0.5 * gamma));
    let cut = Cut {
        z: true,
        h: fval,
        grad,
        yhat: y.to_sym(),
    };

    Ok(OracleResult {
        fval,
        xstar,
        alpha,
        cut,
        dual_val,
    })
}

/// h(alpha) = sum over observed (i,j) of (-A_ij alpha_ij - alpha_ij^2 / 4);
/// -inf as soon as alpha carries mass off the observed set.
pub(crate) fn h_of_alpha(inst: &MatrixCompletionInstance, alpha: &DMatrix<f64>) -> f64 {
    let mut on = DMatrix::from_element(inst.n, inst.m, false);
    let mut h = 0.0;
    for (i, j, a) in inst.observed() {
        let al = alpha[(i, j)];
        h += -a * al - 0.25 * al * al;
        on[(i, j)] = true;
    }
    for j in 0..inst.m {
        for i in 0..inst.n {
            if !on[(i, j)] && alpha[(i, j)] != 0.0 {
                return f64::NEG_INFINITY;
            }
        }
    }
    h
}
