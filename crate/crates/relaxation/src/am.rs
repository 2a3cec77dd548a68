//! Accelerated alternating minimization for the relaxed problem.
//!
//! The objective decouples per block: for fixed `X` the best `Y` in the hull
//! is a water-filling over the singular values of `X` (in the left singular
//! basis); for fixed `Y` the best `X` solves independent per-column ridge
//! systems on the observed entries.  FISTA-style extrapolation is applied to
//! the Y iterates, with a restart whenever the tracked objective rises.

use nalgebra::{DMatrix, DVector};
use oracle::OracleY;
use problem_model::{MatrixCompletionInstance, Payload, RankProblem, Regularizer};
use spectra_core::{eig_sym, project_conv_y, svd_thin, RelaxedY, SymMatrix};

use crate::{am_dual_bound, RelaxError};

/// Eigenvalue floor constant: at iteration `t` the X-step inverts
/// `max(eig, K/t)` instead of the raw eigenvalue, keeping the system
/// bounded while the perturbation vanishes.
const K_FLOOR: f64 = 1e-2;
/// Proximal weight on `||X - X_t||_F^2` in the X-step; stabilizes the
/// extrapolated iterates without moving the fixed point.
const TAU_PROX: f64 = 1e-3;
/// The dual bound costs an oracle call, so it is refreshed every this many
/// iterations (plus a warm-up phase so trivial instances stop immediately).
const DUAL_REFRESH: usize = 20;

/// Mutable state of the accelerated alternation.
#[derive(Debug, Clone)]
pub struct AmState {
    pub x: DMatrix<f64>,
    pub y: RelaxedY,
    pub tau: f64,
    pub tau_prox: f64,
    pub floor: f64,
    pub primal: f64,
    pub best_dual: f64,
}

#[derive(Debug, Clone)]
pub struct AmReport {
    pub iterations: usize,
    pub restarts: usize,
    pub rel_gap: f64,
    /// False when `max_iter` ran out before the gap target was met.
    pub converged: bool,
    /// False when any X-step conjugate-gradient solve hit its iteration cap.
    pub cg_clean: bool,
}

#[derive(Debug, Clone)]
pub struct AmSolution {
    pub y: RelaxedY,
    pub x: DMatrix<f64>,
    pub primal: f64,
    pub dual: f64,
    pub report: AmReport,
}

/// Result of one X-step: the per-column minimizer and whether every
/// conjugate-gradient solve met its residual target.
#[derive(Debug, Clone)]
pub struct XStep {
    pub x: DMatrix<f64>,
    pub converged: bool,
}

/// Hull-constrained Y-step: with `X_t = U diag(sigma) V^T`, the minimizer of
/// `lambda e^T rho + sum_i sigma_i^2 / (2 gamma rho_i)` over
/// `rho in [0,1]^n, sum rho <= k` is `rho_i = clip(sigma_i / sqrt(2 gamma
/// (lambda + mu)), 0, 1)` with `mu >= 0` the trace-budget multiplier, found
/// by bisection; `Y = U diag(rho) U^T`.
pub fn am_y_step(x_t: &DMatrix<f64>, k: usize, lambda: f64, gamma: f64) -> RelaxedY {
    let n = x_t.nrows();
    let svd = svd_thin(x_t).expect("X iterate must stay finite");
    let sigma = &svd.sigma;

    let rho_of = |mu: f64| -> Vec<f64> {
        sigma
            .iter()
            .map(|&s| {
                if s <= 0.0 {
                    return 0.0;
                }
                let den = (2.0 * gamma * (lambda + mu)).sqrt();
                if den == 0.0 {
                    1.0
                } else {
                    (s / den).min(1.0)
                }
            })
            .collect()
    };
    let budget = k as f64;

    let mut rho = rho_of(0.0);
    if rho.iter().sum::<f64>() > budget {
        // sum rho(mu) is continuous and nonincreasing; at `hi` the unclipped
        // sum already equals k, so clipping keeps it at or below budget.
        let sum_sigma: f64 = sigma.iter().sum();
        let mut lo = 0.0;
        let mut hi = (sum_sigma / budget).powi(2) / (2.0 * gamma) - lambda;
        for _ in 0..160 {
            let mid = 0.5 * (lo + hi);
            if rho_of(mid).iter().sum::<f64>() > budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rho = rho_of(hi);
    }

    let mut y = DMatrix::zeros(n, n);
    for (i, &r) in rho.iter().enumerate() {
        if r > 0.0 {
            let u = svd.u.column(i);
            y.ger(r, &u, &u, 1.0);
        }
    }
    // Assembled from an orthonormal basis with coefficients in [0,1] summing
    // to at most k, so the hull invariants hold by construction.
    RelaxedY::new_unchecked(SymMatrix::new(y))
}

/// X-step: exact minimizer of
/// `g(X) + (1/2 gamma) <X X^T, Yinv> + (tau/2) ||X - prox_center||_F^2`
/// where `Yinv` inverts the eigenvalues of `Y` floored at `floor`.  With
/// `floor = 0` the zero eigendirections are excluded instead (X confined to
/// the range of `Y`).  Each column is an independent positive-definite
/// system, solved by conjugate gradients to residual `1e-10 (1 + ||b||)`.
pub fn am_x_step(
    problem: &RankProblem,
    y: &RelaxedY,
    prox_center: &DMatrix<f64>,
    tau_prox: f64,
    floor: f64,
) -> Result<XStep, RelaxError> {
    let inst = match &problem.payload {
        Payload::Completion(inst) => inst,
        Payload::Sensor(_) => return Err(RelaxError::UnsupportedPayload("am_x_step")),
    };
    let gamma = match problem.reg {
        Regularizer::Frobenius { gamma } => gamma,
        Regularizer::Spectral { .. } => return Err(oracle::OracleError::UnsupportedRegularizer.into()),
    };
    let (n, m) = (inst.n, inst.m);

    let pair = eig_sym(y.sym())?;
    // Keep directions with floored eigenvalue > 0; with a positive floor that
    // is all of them, with floor = 0 only the numerical range of Y survives.
    let kept: Vec<usize> = (0..n)
        .filter(|&i| pair.values[i].max(floor) > 1e-12)
        .collect();
    let r = kept.len();
    if r == 0 {
        return Ok(XStep { x: DMatrix::zeros(n, m), converged: true });
    }
    let mut q = DMatrix::zeros(n, r);
    let mut inv_gs = DVector::zeros(r);
    for (col, &i) in kept.iter().enumerate() {
        q.set_column(col, &pair.vectors.column(i));
        inv_gs[col] = 1.0 / (gamma * pair.values[i].max(floor));
    }

    let columns = inst.by_column();
    let mut x = DMatrix::zeros(n, m);
    let mut all_converged = true;
    for j in 0..m {
        // b = Q^T (2 a_j + tau c_j) in range coordinates.
        let mut dense = DVector::zeros(n);
        for &(i, a) in &columns[j] {
            dense[i] = 2.0 * a;
        }
        if tau_prox > 0.0 {
            dense += tau_prox * prox_center.column(j);
        }
        let b = q.transpose() * &dense;

        let apply = |z: &DVector<f64>| -> DVector<f64> {
            let v = &q * z;
            let mut masked = DVector::zeros(n);
            for &(i, _) in &columns[j] {
                masked[i] = v[i];
            }
            let mut out = q.transpose() * masked * 2.0;
            for l in 0..r {
                out[l] += inv_gs[l] * z[l] + tau_prox * z[l];
            }
            out
        };

        let mut z = q.transpose() * prox_center.column(j);
        let tol = 1e-10 * (1.0 + b.norm());
        let mut resid = &b - apply(&z);
        let mut p = resid.clone();
        let mut rs = resid.norm_squared();
        let mut ok = rs.sqrt() <= tol;
        for _ in 0..(50 * r + 200) {
            if ok {
                break;
            }
            let ap = apply(&p);
            let alpha = rs / p.dot(&ap);
            z.axpy(alpha, &p, 1.0);
            resid.axpy(-alpha, &ap, 1.0);
            let rs_next = resid.norm_squared();
            if rs_next.sqrt() <= tol {
                ok = true;
                break;
            }
            p = &resid + (rs_next / rs) * p;
            rs = rs_next;
        }
        all_converged &= ok;
        x.set_column(j, &(&q * z));
    }
    Ok(XStep { x, converged: all_converged })
}

fn completion_loss(inst: &MatrixCompletionInstance, x: &DMatrix<f64>) -> f64 {
    inst.observed().map(|(i, j, a)| (x[(i, j)] - a).powi(2)).sum()
}

/// Tracked objective for restart decisions: the floored surrogate the block
/// steps actually minimize (without the prox term, which vanishes at the
/// fixed point).
fn floored_objective(
    inst: &MatrixCompletionInstance,
    x: &DMatrix<f64>,
    y: &RelaxedY,
    gamma: f64,
    lambda: f64,
    floor: f64,
) -> f64 {
    let pair = eig_sym(y.sym()).expect("Y iterate is finite");
    let xt_v = x.transpose() * &pair.vectors;
    let mut reg = 0.0;
    for i in 0..pair.values.len() {
        let w = xt_v.column(i).norm_squared();
        reg += w / pair.values[i].max(floor);
    }
    completion_loss(inst, x) + reg / (2.0 * gamma) + lambda * y.trace()
}

/// Alternating minimization with FISTA extrapolation on both blocks,
/// an eigenvalue floor `K/t` inside the X-step inverse, restarts on
/// objective increase, and a Ky-Fan dual bound refreshed periodically.
/// Stops at relative gap <= `tol_gap` or after `max_iter` iterations
/// (then `report.converged` is false and the best pair so far is returned).
pub fn solve_relaxation_am(
    problem: &RankProblem,
    tol_gap: f64,
    max_iter: usize,
) -> Result<AmSolution, RelaxError> {
    let inst = match &problem.payload {
        Payload::Completion(inst) => inst,
        Payload::Sensor(_) => return Err(RelaxError::UnsupportedPayload("solve_relaxation_am")),
    };
    let gamma = problem
        .gamma()
        .ok_or(oracle::OracleError::UnsupportedRegularizer)?;
    let (k, lambda) = (problem.k, problem.lambda);
    let (n, m) = (inst.n, inst.m);
    // The final iteration always refreshes the dual pair, so one iteration
    // is the working minimum.
    let max_iter = max_iter.max(1);

    let mut x1 = DMatrix::zeros(n, m);
    for (i, j, a) in inst.observed() {
        x1[(i, j)] = a;
    }

    let mut state = AmState {
        x: x1.clone(),
        y: am_y_step(&x1, k, lambda, gamma),
        tau: 1.0,
        tau_prox: TAU_PROX,
        floor: K_FLOOR,
        primal: f64::INFINITY,
        best_dual: f64::NEG_INFINITY,
    };

    // Previous raw Y-block minimizer feeding the extrapolation.
    let mut w_prev: Option<RelaxedY> = None;
    let mut tracked = f64::INFINITY;

    let mut best_primal = f64::INFINITY;
    let mut best_pair: Option<(RelaxedY, DMatrix<f64>)> = None;
    let mut report = AmReport {
        iterations: 0,
        restarts: 0,
        rel_gap: f64::INFINITY,
        converged: false,
        cg_clean: true,
    };

    for t in 1..=max_iter {
        report.iterations = t;
        state.floor = K_FLOOR / t as f64;
        let tau_next = 0.5 * (1.0 + (1.0 + 4.0 * state.tau * state.tau).sqrt());
        let beta = (state.tau - 1.0) / tau_next;
        state.tau = tau_next;

        // Momentum lives on the Y sequence; the X block is re-solved exactly
        // at the extrapolated point, which keeps the tracked objective
        // monotone in practice (extrapolating both blocks makes the exact
        // block minimizers fight each other and stalls the alternation).
        let w_next = am_y_step(&state.x, k, lambda, gamma);
        state.y = match &w_prev {
            Some(prev) if beta > 0.0 => {
                let extra = w_next.mat() + (w_next.mat() - prev.mat()) * beta;
                project_conv_y(&SymMatrix::new(extra), k)?
            }
            _ => w_next.clone(),
        };

        let step = am_x_step(problem, &state.y, &state.x, state.tau_prox, state.floor)?;
        report.cg_clean &= step.converged;
        let v_next = step.x;

        state.primal = floored_objective(inst, &v_next, &w_next, gamma, lambda, state.floor);
        if state.primal > tracked + 1e-12 {
            // The shrinking floor raises the tracked value on its own; only
            // a rise against the previous pair at the *current* floor means
            // the momentum overshot.
            let prev = match &w_prev {
                Some(w) => floored_objective(inst, &state.x, w, gamma, lambda, state.floor),
                None => f64::INFINITY,
            };
            if state.primal > prev + 1e-12 {
                report.restarts += 1;
                state.tau = 1.0;
            }
        }
        tracked = state.primal;
        state.x = v_next;
        w_prev = Some(w_next.clone());

        if t <= 5 || t % DUAL_REFRESH == 0 || t == max_iter {
            let r = oracle::eval_f(problem, &OracleY::Relaxed(w_next.clone()))?;
            let feas = r.fval + lambda * w_next.trace();
            if feas < best_primal {
                best_primal = feas;
                best_pair = Some((w_next, r.xstar));
            }
            let cand = am_dual_bound(problem, &r.alpha, k, lambda, gamma)?;
            state.best_dual = state.best_dual.max(cand);
            report.rel_gap = (best_primal - state.best_dual) / (1.0 + best_primal.abs());
            if report.rel_gap <= tol_gap {
                report.converged = true;
                break;
            }
        }
    }

    let (y, x) = best_pair.expect("at least one dual refresh ran");
    Ok(AmSolution { y, x, primal: best_primal, dual: state.best_dual, report })
}
