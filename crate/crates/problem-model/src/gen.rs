use nalgebra::DMatrix;

use crate::rng::SeedRng;
use crate::types::{MatrixCompletionInstance, SensorInstance};
use crate::ModelError;

/// Rank-r planted model: M = M_L M_R^T with i.i.d. standard normal factors;
/// each entry observed independently with probability p, plus optional
/// observation noise. Pure function of (parameters, seed).
pub fn gen_matrix_completion(
    n: usize,
    m: usize,
    r: usize,
    p: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<MatrixCompletionInstance, ModelError> {
    if n == 0 || m == 0 || r == 0 || r > n.min(m) {
        return Err(ModelError::InvalidParameter(format!(
            "rank {r} out of range for {n}x{m}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(ModelError::InvalidParameter(format!("sampling fraction {p} not in (0, 1]")));
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(ModelError::InvalidParameter(format!("bad noise sd {noise_sd}")));
    }
    let mut rng = SeedRng::new(seed);
    let ml = DMatrix::from_fn(n, r, |_, _| rng.normal());
    let mr = DMatrix::from_fn(m, r, |_, _| rng.normal());
    let truth = &ml * mr.transpose();

    // One retry on an empty draw, then give up: with any reasonable p the
    // retry fires only for tiny n*m.
    for attempt in 0..2 {
        let mut omega = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            for j in 0..m {
                if rng.uniform() < p {
                    omega.push((i, j));
                    values.push(truth[(i, j)] + noise_sd * rng.normal());
                }
            }
        }
        if omega.is_empty() && attempt == 0 {
            continue;
        }
        if omega.is_empty() {
            return Err(ModelError::EmptyObservations);
        }
        return MatrixCompletionInstance::new(n, m, omega, values, Some(truth));
    }
    unreachable!()
}

/// n points uniform over [-0.5, 0.5]^dim_k; squared distances observed for
/// pairs within radio range, with additive noise (clamped at 0 so the
/// distance invariant holds). lambda_slack defaults to n², the experiment
/// setting for the ℓ1 slack price; callers may override on the instance.
pub fn gen_sensor(
    n: usize,
    dim_k: usize,
    d_radio: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<SensorInstance, ModelError> {
    if n < 2 || dim_k == 0 {
        return Err(ModelError::InvalidParameter(
            "need at least two points and one dimension".into(),
        ));
    }
    if !(d_radio.is_finite() && d_radio > 0.0) {
        return Err(ModelError::InvalidParameter(format!("bad radio range {d_radio}")));
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(ModelError::InvalidParameter(format!("bad noise sd {noise_sd}")));
    }
    let mut rng = SeedRng::new(seed);
    let mut pos = DMatrix::zeros(n, dim_k);
    for i in 0..n {
        for d in 0..dim_k {
            pos[(i, d)] = rng.uniform_in(-0.5, 0.5);
        }
    }
    let mut dist_sq = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let true_d: f64 =
                (0..dim_k).map(|d| (pos[(i, d)] - pos[(j, d)]).powi(2)).sum();
            if true_d <= d_radio * d_radio {
                let observed = (true_d + noise_sd * rng.normal()).max(0.0);
                dist_sq.push((i, j, observed));
            }
        }
    }
    if dist_sq.is_empty() {
        return Err(ModelError::EmptyObservations);
    }
    // Center the positions before forming the ground-truth Gram: distances
    // determine it only up to translation and the trace-penalized solution
    // is the centered one.
    let mut centered = pos.clone();
    for d in 0..dim_k {
        let mean = centered.column(d).sum() / n as f64;
        for i in 0..n {
            centered[(i, d)] -= mean;
        }
    }
    let gram = &centered * centered.transpose();
    SensorInstance::new(n, dim_k, d_radio, dist_sq, (n * n) as f64, 1.0, Some(gram))
}
