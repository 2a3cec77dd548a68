//! Relaxed master problem: minimize `max_i cut_i(Y) + lambda tr(Y)` over the
//! hull `{0 <= Y <= I, tr Y <= k}`.
//!
//! The primal side runs projected subgradient with Polyak steps (projection
//! onto the hull is one eigendecomposition).  The dual side certifies a
//! lower bound: for any simplex weights `w` over the cuts,
//!
//! ```text
//!   L(w) = sum_i w_i offset_i + min_Y <sum_i w_i H_i + lambda I, Y>
//! ```
//!
//! underestimates the master optimum, and the inner minimum is the clipped
//! Ky-Fan sum of the k smallest eigenvalues.  Weights are improved by
//! exponentiated-gradient ascent; whatever accuracy the ascent reaches, the
//! reported lower bound is valid.

use nalgebra::DMatrix;
use problem_model::Cut;
use spectra_core::{eig_sym, project_conv_y, RelaxedY, SymMatrix};

use crate::RelaxError;

const ROUNDS: usize = 25;
const PRIMAL_STEPS: usize = 30;
const DUAL_STEPS: usize = 20;
/// Polyak damping; the target (the certified bound) may undershoot the
/// optimum, so full steps would oscillate.
const POLYAK: f64 = 0.7;

/// Warm-start state carried across master solves while the cut pool grows.
#[derive(Debug, Clone, Default)]
pub struct MasterWarmth {
    pub y: Option<RelaxedY>,
    pub w: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MasterBound {
    /// Best hull point found; its value is `upper`.
    pub y: RelaxedY,
    pub upper: f64,
    /// Certified: no hull point has master value below this.
    pub lower: f64,
}

/// Master objective at `y`.
fn master_value(cuts: &[Cut], lambda: f64, y: &SymMatrix) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for (i, c) in cuts.iter().enumerate() {
        let v = c.value_at(y);
        if v > best {
            best = v;
            arg = i;
        }
    }
    (best + lambda * y.trace(), arg)
}

/// `min_Y <C, Y>` over the hull plus the minimizing projection: sum of the
/// k smallest eigenvalues clipped at zero, attained on their eigenvectors.
fn hull_linear_min(c: &SymMatrix, k: usize) -> (f64, DMatrix<f64>) {
    let n = c.n();
    let pair = eig_sym(c).expect("finite weight combination");
    let mut val = 0.0;
    let mut y = DMatrix::zeros(n, n);
    // Eigenvalues come back descending; the k smallest are the tail.
    for j in n.saturating_sub(k)..n {
        if pair.values[j] < 0.0 {
            val += pair.values[j];
            let v = pair.vectors.column(j);
            y.ger(1.0, &v, &v, 1.0);
        }
    }
    (val, y)
}

fn certified_lower(
    cuts: &[Cut],
    lambda: f64,
    n: usize,
    k: usize,
    w: &[f64],
) -> (f64, Vec<f64>) {
    let mut c = DMatrix::identity(n, n) * lambda;
    for (wi, cut) in w.iter().zip(cuts) {
        c += cut.grad.mat() * *wi;
    }
    let (linear, y_w) = hull_linear_min(&SymMatrix::new(c), k);
    let mut value = linear;
    let mut grad = Vec::with_capacity(cuts.len());
    for (wi, cut) in w.iter().zip(cuts) {
        value += wi * cut.offset();
        // Supergradient at fixed Y_w; `linear` already carries the
        // w-dependence through the weight combination.
        grad.push(cut.offset() + cut.grad.mat().dot(&y_w));
    }
    (value, grad)
}

/// Solve the relaxed master to `tol` (relative), or as close as the step
/// budget allows; `lower` is certified either way.  `warmth` is updated for
/// the next call on a grown pool.
pub fn relaxed_master(
    cuts: &[Cut],
    lambda: f64,
    n: usize,
    k: usize,
    tol: f64,
    warmth: &mut MasterWarmth,
) -> Result<MasterBound, RelaxError> {
    assert!(!cuts.is_empty(), "master needs at least one cut");

    let mut w = warmth.w.clone();
    if w.len() != cuts.len() {
        let fill = if w.is_empty() { 1.0 } else { w.iter().sum::<f64>() / w.len() as f64 };
        w.resize(cuts.len(), fill.max(1e-12));
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
    }

    let mut y = match &warmth.y {
        Some(y) => y.clone(),
        None => project_conv_y(&SymMatrix::zeros(n), k)?,
    };
    let (mut upper, _) = master_value(cuts, lambda, y.sym());
    let mut best_y = y.clone();
    let (mut lower, _) = certified_lower(cuts, lambda, n, k, &w);

    'outer: for round in 1..=ROUNDS {
        if upper - lower <= tol * (1.0 + upper.abs()) {
            break;
        }
        // Dual ascent on the simplex.
        for step in 0..DUAL_STEPS {
            let (val, grad) = certified_lower(cuts, lambda, n, k, &w);
            lower = lower.max(val);
            let scale = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if scale == 0.0 {
                break;
            }
            let eta = 0.7 / (scale * (1.0 + (round * DUAL_STEPS + step) as f64).sqrt());
            let mut total = 0.0;
            for (wi, g) in w.iter_mut().zip(&grad) {
                *wi *= (eta * g).exp();
                total += *wi;
            }
            w.iter_mut().for_each(|x| *x /= total);
        }
        // Primal descent with Polyak steps toward the certified bound.
        for _ in 0..PRIMAL_STEPS {
            let (val, active) = master_value(cuts, lambda, y.sym());
            if val < upper {
                upper = val;
                best_y = y.clone();
            }
            if upper - lower <= tol * (1.0 + upper.abs()) {
                break 'outer;
            }
            let g = cuts[active].grad.mat() + DMatrix::identity(n, n) * lambda;
            let gnorm = g.norm_squared();
            if gnorm == 0.0 {
                break;
            }
            let step = POLYAK * (val - lower).max(0.0) / gnorm;
            if step == 0.0 {
                break;
            }
            let moved = y.mat() - g * step;
            y = project_conv_y(&SymMatrix::new(moved), k)?;
        }
    }

    warmth.y = Some(best_y.clone());
    warmth.w = w;
    Ok(MasterBound { y: best_y, upper, lower })
}
