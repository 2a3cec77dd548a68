//! Sensor payload: the variable is a symmetric Gram estimate `G` with
//! squared-distance measurements `<E_p, G> = G_ii + G_jj - 2 G_ij`.  Each
//! measurement carries an l1-priced slack:
//!
//! ```text
//!     g(G) = w_tr tr(G) + sum_p min_xi (<E_p,G> + xi - D_p)^2 + lam |xi|
//! ```
//!
//! Confining G to range(Y) via `G = q W q^T` (W symmetric r x r) turns the
//! inner problem into a small piecewise-quadratic program in packed W
//! coordinates.  Alternation is exact in both blocks: the W-step is a ridge
//! solve whose matrix never changes, the xi-step is soft-thresholding.
//!
//! Duality.  `alpha = w_tr I + sum_p 2 r_p E_p` with the fitted residuals
//! `r_p = <E_p,G> + xi_p - D_p`; finiteness of h needs `|r_p| <= lam/2`, so
//! intermediate iterates are clamped before being offered as a dual witness.
//! Because the variable is symmetric, the coupling term is not the
//! rectangular `-(gamma/2) <alpha, Y alpha>` but the value of a small
//! Lyapunov system in the eigenbasis of Y:
//!
//! ```text
//!     psi(alpha, Y) = -gamma sum_{l,a} abar_la^2 s_l s_a / (s_l + s_a),
//!     abar = q^T alpha q.
//! ```
//!
//! The symmetric coupling dominates the rectangular one, so cuts are
//! anchored at the rectangular dual value: `h(alpha) - (gamma/2)<alpha^2, Y>`
//! is affine in Y and underestimates f everywhere, at the price of slack at
//! the anchor whenever alpha does not commute with Y.

use nalgebra::{Cholesky, DMatrix, DVector};
use problem_model::{Cut, SensorInstance};
use spectra_core::SymMatrix;

use crate::{OracleError, OracleResult, OracleY};

const GAP_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 500_000;
const STALL_SWEEPS: usize = 50;

pub(crate) fn eval(
    inst: &SensorInstance,
    gamma: f64,
    y: &OracleY,
) -> Result<OracleResult, OracleError> {
    let (q, s) = y.basis();
    let n = inst.n;
    let r = q.ncols();
    let lam = inst.lambda_slack;
    let wt = inst.trace_weight;
    let pairs = &inst.dist_sq;
    let np = pairs.len();

    // Packed symmetric coordinates (l <= a); off-diagonals appear twice in W.
    let dim = r * (r + 1) / 2;
    let mut coords = Vec::with_capacity(dim);
    for l in 0..r {
        for a in l..r {
            coords.push((l, a));
        }
    }
    // phi_p . w  ==  b_p^T W b_p  with  b_p = q^T (e_i - e_j).
    let mut phi = DMatrix::zeros(np, dim);
    for (p, &(i, j, _)) in pairs.iter().enumerate() {
        let b = (q.row(i) - q.row(j)).transpose();
        for (c, &(l, a)) in coords.iter().enumerate() {
            phi[(p, c)] = if l == a { b[l] * b[l] } else { 2.0 * b[l] * b[a] };
        }
    }
    // (1/2gamma) tr(W diag(1/s) W) in packed coordinates.
    let ridge: Vec<f64> = coords
        .iter()
        .map(|&(l, a)| {
            if l == a {
                1.0 / (2.0 * gamma * s[l])
            } else {
                (1.0 / s[l] + 1.0 / s[a]) / (2.0 * gamma)
            }
        })
        .collect();
    let trace_vec: Vec<f64> = coords
        .iter()
        .map(|&(l, a)| if l == a { 1.0 } else { 0.0 })
        .collect();

    // The W-step matrix is constant: factor once.
    let chol = if dim > 0 {
        let mut normal = phi.transpose() * &phi;
        for c in 0..dim {
            normal[(c, c)] += ridge[c];
        }
        Some(Cholesky::new(normal).ok_or(OracleError::SingularSystem)?)
    } else {
        None
    };

    let mut w = DVector::zeros(dim);
    let mut xi = vec![0.0; np];
    let mut fit: Vec<f64> = vec![0.0; np]; // phi_p . w
    let objective = |w: &DVector<f64>, xi: &[f64], fit: &[f64]| -> f64 {
        let mut v = 0.0;
        for p in 0..np {
            let d = fit[p] + xi[p] - pairs[p].2;
            v += d * d + lam * xi[p].abs();
        }
        for c in 0..dim {
            v += ridge[c] * w[c] * w[c] + wt * trace_vec[c] * w[c];
        }
        v
    };

    let mut fval = objective(&w, &xi, &fit);
    let mut dual = dual_value(&xi, &fit, pairs, &q, &s, gamma, lam, wt);
    let mut stall = 0usize;
    for _ in 0..MAX_SWEEPS {
        if fval - dual <= GAP_TOL * (1.0 + fval.abs()) {
            break;
        }
        if let Some(chol) = &chol {
            let mut rhs = DVector::zeros(dim);
            for p in 0..np {
                let t = pairs[p].2 - xi[p];
                for c in 0..dim {
                    rhs[c] += phi[(p, c)] * t;
                }
            }
            for c in 0..dim {
                rhs[c] -= 0.5 * wt * trace_vec[c];
            }
            w = chol.solve(&rhs);
            let f = &phi * &w;
            fit.copy_from_slice(f.as_slice());
        }
        for p in 0..np {
            xi[p] = soft(pairs[p].2 - fit[p], 0.5 * lam);
        }
        let next = objective(&w, &xi, &fit);
        dual = dual_value(&xi, &fit, pairs, &q, &s, gamma, lam, wt).max(dual);
        stall = if fval - next <= 1e-16 * (1.0 + fval.abs()) {
            stall + 1
        } else {
            0
        };
        fval = next;
        if stall >= STALL_SWEEPS {
            break;
        }
    }

    // Assemble G, the clamped dual witness, and the cut.
    let mut wmat = DMatrix::zeros(r, r);
    for (c, &(l, a)) in coords.iter().enumerate() {
        wmat[(l, a)] = w[c];
        wmat[(a, l)] = w[c];
    }
    let xstar = &q * wmat * q.transpose();

    let mut alpha = DMatrix::zeros(n, n);
    for l in 0..n {
        alpha[(l, l)] = wt;
    }
    let mut h = 0.0;
    for (p, &(i, j, d)) in pairs.iter().enumerate() {
        let rp = clamp(fit[p] + xi[p] - d, 0.5 * lam);
        h += -2.0 * rp * d - rp * rp;
        alpha[(i, i)] += 2.0 * rp;
        alpha[(j, j)] += 2.0 * rp;
        alpha[(i, j)] -= 2.0 * rp;
        alpha[(j, i)] -= 2.0 * rp;
    }

    // Rectangular coupling <alpha, Y alpha> = sum_l s_l ||alpha q_l||^2
    // anchors the cut; the gradient is the usual -(gamma/2) alpha^2.
    let aq = &alpha * &q;
    let mut rect = 0.0;
    for l in 0..r {
        rect += s[l] * aq.column(l).norm_squared();
    }
    let grad = SymMatrix::new(&alpha * &alpha * (-0.5 * gamma));
    let cut = Cut {
        z: true,
        h: h - 0.5 * gamma * rect,
        grad,
        yhat: y.to_sym(),
    };

    Ok(OracleResult {
        fval,
        xstar,
        alpha,
        cut,
        dual_val: dual,
    })
}

/// Certified lower bound on the inner value at any iterate: clamp the
/// residuals so h stays finite, then add the exact symmetric coupling.
#[allow(clippy::too_many_arguments)]
fn dual_value(
    xi: &[f64],
    fit: &[f64],
    pairs: &[(usize, usize, f64)],
    q: &DMatrix<f64>,
    s: &[f64],
    gamma: f64,
    lam: f64,
    wt: f64,
) -> f64 {
    let r = q.ncols();
    let mut abar = DMatrix::zeros(r, r);
    for l in 0..r {
        abar[(l, l)] = wt;
    }
    let mut h = 0.0;
    for (p, &(i, j, d)) in pairs.iter().enumerate() {
        let rp = clamp(fit[p] + xi[p] - d, 0.5 * lam);
        h += -2.0 * rp * d - rp * rp;
        let b = (q.row(i) - q.row(j)).transpose();
        abar.ger(2.0 * rp, &b, &b, 1.0);
    }
    let mut psi = 0.0;
    for l in 0..r {
        for a in 0..r {
            psi -= gamma * abar[(l, a)] * abar[(l, a)] * s[l] * s[a] / (s[l] + s[a]);
        }
    }
    h + psi
}

fn soft(t: f64, thresh: f64) -> f64 {
    if t > thresh {
        t - thresh
    } else if t < -thresh {
        t + thresh
    } else {
        0.0
    }
}

fn clamp(r: f64, bound: f64) -> f64 {
    r.max(-bound).min(bound)
}

/// Finite only on the span of the measurement matrices: recover the pair
/// coefficients from the off-diagonal, then check the diagonal and the
/// slack-price bound exactly.
pub(crate) fn h_of_alpha(inst: &SensorInstance, alpha: &DMatrix<f64>) -> f64 {
    let n = inst.n;
    let scale = 1.0 + alpha.amax();
    let tol = 1e-9 * scale;
    let mut c = vec![0.0; inst.dist_sq.len()];
    let mut diag = vec![inst.trace_weight; n];
    let mut on = DMatrix::from_element(n, n, false);
    for (p, &(i, j, _)) in inst.dist_sq.iter().enumerate() {
        if (alpha[(i, j)] - alpha[(j, i)]).abs() > tol {
            return f64::NEG_INFINITY;
        }
        c[p] = -alpha[(i, j)];
        if c[p].abs() > inst.lambda_slack + tol {
            return f64::NEG_INFINITY;
        }
        diag[i] += c[p];
        diag[j] += c[p];
        on[(i, j)] = true;
        on[(j, i)] = true;
    }
    for i in 0..n {
        if (alpha[(i, i)] - diag[i]).abs() > tol {
            return f64::NEG_INFINITY;
        }
        for j in 0..n {
            if i != j && !on[(i, j)] && alpha[(i, j)].abs() > tol {
                return f64::NEG_INFINITY;
            }
        }
    }
    inst.dist_sq
        .iter()
        .zip(&c)
        .map(|(&(_, _, d), &cp)| -cp * d - 0.25 * cp * cp)
        .sum()
}
