use crate::SpectraError;

/// Capacity of the capped simplex `{rho : 0 <= rho_i <= 1, sum rho_i <= k}`.
/// The capacity is a real `>= 0`; the set always contains the origin.
#[derive(Clone, Copy, Debug)]
pub struct CappedSimplexSpec {
    pub k: f64,
}

impl CappedSimplexSpec {
    pub fn new(k: f64) -> Result<Self, SpectraError> {
        if !k.is_finite() || k < 0.0 {
            return Err(SpectraError::InvalidInput(format!("capacity k = {k} must be finite and >= 0")));
        }
        Ok(CappedSimplexSpec { k })
    }
}

/// Euclidean projection onto the capped simplex.
///
/// If clipping to the box already satisfies the sum constraint, that is the
/// projection. Otherwise the sum constraint is active and the projection is
/// `rho_i = clamp(v_i - s, 0, 1)` for the Lagrange shift `s >= 0` solving
/// `sum_i rho_i(s) = k`; `s` is found by bisection to interval width 1e-13,
/// which leaves a KKT residual `|sum rho - k| <= 1e-10` at the sizes used
/// here. The feasible (upper) end of the bracket is returned.
pub fn project_capped_simplex(v: &[f64], spec: CappedSimplexSpec) -> Result<Vec<f64>, SpectraError> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(SpectraError::InvalidInput("non-finite coordinates".into()));
    }
    let boxed: Vec<f64> = v.iter().map(|&x| x.clamp(0.0, 1.0)).collect();
    let sum: f64 = boxed.iter().sum();
    if sum <= spec.k {
        return Ok(boxed);
    }

    let rho_at = |s: f64| -> Vec<f64> { v.iter().map(|&x| (x - s).clamp(0.0, 1.0)).collect() };
    let sum_at = |s: f64| -> f64 { v.iter().map(|&x| (x - s).clamp(0.0, 1.0)).sum() };

    // sum_at is continuous and nonincreasing; sum_at(0) > k and
    // sum_at(max v) = 0 <= k, so the root is bracketed.
    let mut lo = 0.0;
    let mut hi = v.iter().cloned().fold(0.0, f64::max);
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if sum_at(mid) > spec.k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(rho_at(hi))
}
