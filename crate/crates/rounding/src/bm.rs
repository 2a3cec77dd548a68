//! Factored alternating refinement on `X = U V^T`.
//!
//! Each half-step is an exact block minimization: with one factor fixed the
//! objective splits into independent k-dimensional ridge systems per row
//! (resp. column), so the objective is nonincreasing half-step by half-step
//! with no line search.

use nalgebra::{DMatrix, DVector};
use problem_model::{MatrixCompletionInstance, Payload, RankProblem, Regularizer, SeedRng};
use spectra_core::{eig_sym, SymMatrix};

use crate::RoundError;

#[derive(Debug, Clone)]
pub struct BmSolution {
    pub x: DMatrix<f64>,
    pub objective: f64,
    /// Objective after every half-step, for monotonicity audits.
    pub trace: Vec<f64>,
    /// True when a collapsed factor column was reseeded.
    pub reinitialized: bool,
}

fn objective(inst: &MatrixCompletionInstance, x: &DMatrix<f64>, gamma: f64) -> f64 {
    let mut v = x.norm_squared() / (2.0 * gamma);
    for (i, j, a) in inst.observed() {
        v += (x[(i, j)] - a).powi(2);
    }
    v
}

/// Solve the per-slice ridge systems for the right factor: row `j` of `V`
/// minimizes the observed residuals of column `j` plus the ridge coupling
/// `(1/2 gamma) w^T (U^T U) w`.
fn solve_factor(
    fixed: &DMatrix<f64>,
    slices: &[Vec<(usize, f64)>],
    gamma: f64,
) -> Option<DMatrix<f64>> {
    let k = fixed.ncols();
    let gram = fixed.transpose() * fixed;
    let mut out = DMatrix::zeros(slices.len(), k);
    for (s, entries) in slices.iter().enumerate() {
        let mut normal = &gram / (2.0 * gamma);
        let mut rhs = DVector::zeros(k);
        for &(i, a) in entries {
            let u = fixed.row(i).transpose();
            normal.ger(1.0, &u, &u, 1.0);
            rhs.axpy(a, &u, 1.0);
        }
        let sol = match normal.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            // Rank-deficient block (more columns than the observations pin
            // down). The quadratic is still bounded below, so the normal
            // system is consistent; take the least-norm minimizer.
            None => pseudo_solve(&normal, &rhs)?,
        };
        out.row_mut(s).copy_from(&sol.transpose());
    }
    Some(out)
}

fn pseudo_solve(normal: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let pair = eig_sym(&SymMatrix::new(normal.clone())).ok()?;
    let cutoff = 1e-12 * pair.values.iter().cloned().fold(0.0, f64::max);
    let mut sol = DVector::zeros(rhs.len());
    for (i, &mu) in pair.values.iter().enumerate() {
        if mu > cutoff && mu > 0.0 {
            let q = pair.vectors.column(i);
            sol.axpy(q.dot(rhs) / mu, &q.clone_owned(), 1.0);
        }
    }
    Some(sol)
}

fn collapsed_column(f: &DMatrix<f64>) -> Option<usize> {
    let scale = 1.0 + f.norm();
    (0..f.ncols()).find(|&c| f.column(c).norm() <= 1e-12 * scale)
}

/// Alternating exact ridge refinement from an `n x k` starting factor.
/// Stops when the objective's relative decrease over a full sweep drops
/// below `tol` or after `max_iter` sweeps.
pub fn burer_monteiro(
    problem: &RankProblem,
    u_init: &DMatrix<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<BmSolution, RoundError> {
    let inst = match &problem.payload {
        Payload::Completion(inst) => inst,
        Payload::Sensor(_) => return Err(RoundError::UnsupportedPayload("burer_monteiro")),
    };
    let gamma = match problem.reg {
        Regularizer::Frobenius { gamma } => gamma,
        Regularizer::Spectral { .. } => {
            return Err(oracle::OracleError::UnsupportedRegularizer.into())
        }
    };
    assert_eq!(u_init.nrows(), inst.n, "factor height must match the instance");

    let by_column = inst.by_column();
    let by_row = {
        let mut rows = vec![Vec::new(); inst.n];
        for (i, j, v) in inst.observed() {
            rows[i].push((j, v));
        }
        rows
    };

    let mut u = u_init.clone();
    let mut reinitialized = false;
    let mut rng = SeedRng::new(0x5eed);
    let mut trace = Vec::new();
    let mut prev = f64::INFINITY;
    let mut best: Option<(DMatrix<f64>, f64)> = None;

    let reseed = |f: &mut DMatrix<f64>, used: &mut bool, rng: &mut SeedRng| -> Result<(), RoundError> {
        while let Some(c) = collapsed_column(f) {
            if *used {
                return Err(RoundError::DegenerateFactor);
            }
            *used = true;
            let scale = 0.01 * (1.0 + f.norm()) / (f.nrows() as f64).sqrt();
            for i in 0..f.nrows() {
                f[(i, c)] = scale * rng.normal();
            }
        }
        Ok(())
    };

    reseed(&mut u, &mut reinitialized, &mut rng)?;
    for _ in 0..max_iter.max(1) {
        let mut v = solve_factor(&u, &by_column, gamma).ok_or(RoundError::DegenerateFactor)?;
        reseed(&mut v, &mut reinitialized, &mut rng)?;
        let x = &u * v.transpose();
        let half = objective(inst, &x, gamma);
        trace.push(half);
        if best.as_ref().map_or(true, |(_, b)| half < *b) {
            best = Some((x, half));
        }

        u = solve_factor(&v, &by_row, gamma).ok_or(RoundError::DegenerateFactor)?;
        reseed(&mut u, &mut reinitialized, &mut rng)?;
        let x = &u * v.transpose();
        let cur = objective(inst, &x, gamma);
        trace.push(cur);
        if best.as_ref().map_or(true, |(_, b)| cur < *b) {
            best = Some((x, cur));
        }

        if prev - cur <= tol * (1.0 + cur.abs()) {
            break;
        }
        prev = cur;
    }

    let (x, objective) = best.expect("at least one sweep runs");
    Ok(BmSolution { x, objective, trace, reinitialized })
}
