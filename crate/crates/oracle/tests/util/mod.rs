//! Shared fixtures: random hull points and an independent first-order
//! reference solver for the inner problem.  The reference never touches the
//! oracle's normal equations: it runs projected gradient in the full matrix
//! space, with the range projector taken from the SVD-based pseudo-inverse
//! rather than the eigensolve the oracle uses.

// Each test binary compiles its own copy and uses a different subset.
#![allow(dead_code)]

use nalgebra::DMatrix;
use oracle::OracleY;
use problem_model::{
    MatrixCompletionInstance, Payload, RankProblem, Regularizer, SeedRng, SensorInstance,
};
use spectra_core::{pseudo_inverse, svd_thin, ProjectionMatrix, RelaxedY, SymMatrix};

pub fn gaussian(rng: &mut SeedRng, n: usize, m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, m, |_, _| rng.normal())
}

/// Haar-ish orthonormal n x r frame from the left factor of a Gaussian.
pub fn random_frame(rng: &mut SeedRng, n: usize, r: usize) -> DMatrix<f64> {
    let u = svd_thin(&gaussian(rng, n, r)).unwrap().u;
    assert_eq!(u.ncols(), r, "Gaussian matrices have full rank");
    u
}

pub fn random_projection(rng: &mut SeedRng, n: usize, r: usize) -> ProjectionMatrix {
    if r == 0 {
        return ProjectionMatrix::zero(n);
    }
    ProjectionMatrix::from_factor(random_frame(rng, n, r)).unwrap()
}

/// Relaxed point with eigenvalues kept away from both 0 and 1 so that the
/// reference solver and the oracle agree on the numerical range.
pub fn random_relaxed(rng: &mut SeedRng, n: usize, k: usize) -> RelaxedY {
    let q = random_frame(rng, n, n);
    let mut s: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.05, 0.95)).collect();
    let total: f64 = s.iter().sum();
    if total > k as f64 {
        for v in &mut s {
            *v *= k as f64 / total;
        }
    }
    let mut y = DMatrix::zeros(n, n);
    for (l, &sl) in s.iter().enumerate() {
        let col = q.column(l);
        y.ger(sl, &col.clone_owned(), &col.clone_owned(), 1.0);
    }
    RelaxedY::new(SymMatrix::new(y), k).unwrap()
}

pub fn random_completion(
    rng: &mut SeedRng,
    n: usize,
    m: usize,
    k: usize,
    p: f64,
    gamma: f64,
) -> RankProblem {
    let mut omega = Vec::new();
    let mut values = Vec::new();
    for i in 0..n {
        for j in 0..m {
            if rng.uniform() < p {
                omega.push((i, j));
                values.push(rng.normal());
            }
        }
    }
    if omega.is_empty() {
        omega.push((0, 0));
        values.push(rng.normal());
    }
    let inst = MatrixCompletionInstance::new(n, m, omega, values, None).unwrap();
    RankProblem::new(k, 0.0, Regularizer::Frobenius { gamma }, Payload::Completion(inst)).unwrap()
}

pub fn random_sensor(
    rng: &mut SeedRng,
    n: usize,
    k: usize,
    lambda_slack: f64,
    trace_weight: f64,
    gamma: f64,
) -> RankProblem {
    let mut dist = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.uniform() < 0.7 {
                dist.push((i, j, rng.uniform_in(0.0, 2.0)));
            }
        }
    }
    if dist.is_empty() {
        dist.push((0, 1, rng.uniform_in(0.0, 2.0)));
    }
    let inst =
        SensorInstance::new(n, k, 1.0, dist, lambda_slack, trace_weight, None).unwrap();
    RankProblem::new(k, 0.0, Regularizer::Frobenius { gamma }, Payload::Sensor(inst)).unwrap()
}

/// Dense hull point for cut evaluation.
pub fn random_hull_point(rng: &mut SeedRng, n: usize, k: usize) -> RelaxedY {
    let a = gaussian(rng, n, n);
    let sym = SymMatrix::new(&a * a.transpose() * (1.0 / n as f64));
    spectra_core::project_conv_y(&sym, k).unwrap()
}

/// Projected gradient descent on the raw inner problem
///     min  g(X) + (1/2 gamma) <X, Ydag X>   s.t.  columns of X in range(Y).
/// The regularizer is strongly convex on the range, so the plain method
/// converges linearly; `iters` is sized for well past machine precision.
pub fn reference_completion_fval(
    problem: &RankProblem,
    y: &OracleY,
    iters: usize,
) -> f64 {
    let inst = problem.payload.completion().expect("completion payload");
    let gamma = problem.gamma().unwrap();
    let ydense = y.to_sym().into_inner();
    let ydag = pseudo_inverse(&ydense);
    let proj = &ydense * &ydag; // orthogonal projector onto range(Y)
    let (n, m) = (inst.n, inst.m);

    let lip = 2.0 + spectral_norm(&ydag) / gamma;
    let step = 1.0 / lip;

    let value = |x: &DMatrix<f64>| -> f64 {
        let mut v = 0.0;
        for (i, j, a) in inst.observed() {
            let d = x[(i, j)] - a;
            v += d * d;
        }
        v + (x.transpose() * &ydag * x).trace() / (2.0 * gamma)
    };

    let mut x = DMatrix::zeros(n, m);
    for _ in 0..iters {
        let mut grad = &ydag * &x / gamma;
        for (i, j, a) in inst.observed() {
            grad[(i, j)] += 2.0 * (x[(i, j)] - a);
        }
        x = &proj * (&x - step * grad);
    }
    value(&x)
}

/// Same idea for the sensor payload: composite FISTA over (G, xi) with the
/// two-sided range projection for the symmetric variable and
/// soft-thresholding for the slacks.
pub fn reference_sensor_fval(problem: &RankProblem, y: &OracleY, iters: usize) -> f64 {
    let inst = problem.payload.sensor().expect("sensor payload");
    let gamma = problem.gamma().unwrap();
    let ydense = y.to_sym().into_inner();
    let ydag = pseudo_inverse(&ydense);
    let proj = &ydense * &ydag;
    let n = inst.n;
    let np = inst.dist_sq.len();
    let (lam, wt) = (inst.lambda_slack, inst.trace_weight);

    // <E_p, G> amplifies by at most ||E_p||_F = 2 per pair; xi enters with
    // coefficient 1, so the loss curvature is below 4 * (4 np + 1).  Crude
    // but safe bound for the smooth part.
    let lip = 4.0 * (4.0 * np as f64 + 1.0) + spectral_norm(&ydag) / gamma;
    let step = 1.0 / lip;

    let resid = |g: &DMatrix<f64>, xi: &[f64]| -> Vec<f64> {
        inst.dist_sq
            .iter()
            .zip(xi)
            .map(|(&(i, j, d), &x)| g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)] + x - d)
            .collect()
    };
    let value = |g: &DMatrix<f64>, xi: &[f64]| -> f64 {
        let mut v = (g.transpose() * &ydag * g).trace() / (2.0 * gamma) + wt * g.trace();
        for (r, &x) in resid(g, xi).iter().zip(xi) {
            v += r * r + lam * x.abs();
        }
        v
    };

    let mut g = DMatrix::zeros(n, n);
    let mut xi = vec![0.0; np];
    let (mut gz, mut xz) = (g.clone(), xi.clone());
    let mut t = 1.0f64;
    let mut best = value(&g, &xi);
    let mut prev = best;
    for _ in 0..iters {
        let r = resid(&gz, &xz);
        // Gradient restricted to the symmetric subspace: Y^+ G must be
        // symmetrized or the iterates drift off it and `value` stops being
        // the objective.
        let mut grad_g = (&ydag * &gz + &gz * &ydag) / (2.0 * gamma);
        grad_g += DMatrix::identity(n, n) * wt;
        for (p, &(i, j, _)) in inst.dist_sq.iter().enumerate() {
            grad_g[(i, i)] += 2.0 * r[p];
            grad_g[(j, j)] += 2.0 * r[p];
            grad_g[(i, j)] -= 2.0 * r[p];
            grad_g[(j, i)] -= 2.0 * r[p];
        }
        let g_next = &proj * (&gz - step * grad_g) * &proj;
        let xi_next: Vec<f64> = (0..np)
            .map(|p| soft(xz[p] - step * 2.0 * r[p], step * lam))
            .collect();
        let cur = value(&g_next, &xi_next);
        best = best.min(cur);
        // Adaptive restart keeps the momentum from undoing progress and
        // restores a linear rate on this strongly convex problem.
        let (t_next, coef) = if cur > prev {
            (1.0, 0.0)
        } else {
            let tn = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            (tn, (t - 1.0) / tn)
        };
        gz = &g_next + (&g_next - &g) * coef;
        xz = xi_next
            .iter()
            .zip(&xi)
            .map(|(&a, &b)| a + coef * (a - b))
            .collect();
        g = g_next;
        xi = xi_next;
        t = t_next;
        prev = cur;
    }
    best
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

/// Golden-section minimization of a unimodal function on [lo, hi].
pub fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

fn spectral_norm(x: &DMatrix<f64>) -> f64 {
    let sigma = svd_thin(x).unwrap().sigma;
    if sigma.is_empty() {
        0.0
    } else {
        sigma[0]
    }
}
