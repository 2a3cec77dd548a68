//! Master problems over the projection set: a complete box branch-and-bound
//! for rank one, and hull rounding with a certified relaxed bound for
//! higher ranks.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector};
use problem_model::{Cut, SeedRng};
use relaxation::{relaxed_master, MasterWarmth};
use rounding::greedy_round;
use spectra_core::{eig_sym, project_conv_y, ProjectionMatrix, SymMatrix};

use crate::interval::sphere_box_quad_min;
use crate::ExactError;

/// Boxes narrower than this are not split further; their interval bound is
/// folded into the reported floor instead.
const WIDTH_FLOOR: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct K1Master {
    pub y: ProjectionMatrix,
    /// Master objective at `y`.
    pub value: f64,
    /// Certified lower bound on the master optimum (trace term included).
    pub theta: f64,
    /// False when the node budget ran out before the gap closed.
    pub certified: bool,
    pub nodes: usize,
}

#[derive(Debug, Clone)]
pub struct HeuristicMaster {
    pub y: ProjectionMatrix,
    /// Master objective at `y` — an upper bound on the master optimum.
    pub value: f64,
    /// Certified hull lower bound on the master optimum.
    pub relaxed_lb: f64,
}

/// `max_i(offset_i + <H_i, Y>) + lambda tr(Y)` for `Y = u u^T`.
fn value_at_unit(cuts: &[Cut], lambda: f64, u: &DVector<f64>) -> f64 {
    cuts.iter()
        .map(|c| c.offset() + (c.grad.mat() * u).dot(u))
        .fold(f64::NEG_INFINITY, f64::max)
        + lambda
}

fn value_at_sym(cuts: &[Cut], lambda: f64, y: &SymMatrix) -> f64 {
    cuts.iter().map(|c| c.value_at(y)).fold(f64::NEG_INFINITY, f64::max) + lambda * y.trace()
}

struct Node {
    bound: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Reversed: BinaryHeap pops the largest, we want the smallest bound.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound)
    }
}

/// Node lower bound: interval bound per cut, strengthened with the cut's
/// smallest eigenvalue (a global bound on the sphere), `+inf` when the box
/// cannot reach the sphere.
fn node_bound(
    cuts: &[Cut],
    offsets: &[f64],
    eig_floors: &[f64],
    lambda: f64,
    lo: &[f64],
    hi: &[f64],
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (i, cut) in cuts.iter().enumerate() {
        let iv = sphere_box_quad_min(&cut.grad, lo, hi);
        if iv == f64::INFINITY {
            return f64::INFINITY;
        }
        best = best.max(offsets[i] + iv.max(eig_floors[i]));
    }
    best + lambda
}

fn center_unit(lo: &[f64], hi: &[f64]) -> DVector<f64> {
    let n = lo.len();
    let mut c = DVector::from_fn(n, |j, _| 0.5 * (lo[j] + hi[j]));
    if c.norm() < 1e-9 {
        // Degenerate center (box straddling the origin): lean on the widest
        // coordinate's far endpoint instead.
        let j = (0..n)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap();
        c[j] = if hi[j].abs() >= lo[j].abs() { hi[j] } else { lo[j] };
        if c.norm() < 1e-9 {
            c[j] = 1.0;
        }
    }
    c.normalize()
}

/// Complete search for `min_Y max_i(offset_i + <H_i, Y>) + lambda tr(Y)`
/// over rank-at-most-one projections. The rank-zero candidate is evaluated
/// exactly; rank one is branched over boxes in `[-1,1]^n` with the first
/// coordinate pinned nonnegative (u and -u give the same Y).
pub fn master_solve_k1(
    cuts: &[Cut],
    lambda: f64,
    n: usize,
    eps_master: f64,
    node_limit: usize,
) -> Result<K1Master, ExactError> {
    if cuts.is_empty() {
        return Err(ExactError::EmptyPool);
    }
    let offsets: Vec<f64> = cuts.iter().map(Cut::offset).collect();
    let eig_floors: Vec<f64> = cuts
        .iter()
        .map(|c| {
            let vals = &eig_sym(&c.grad).expect("cut gradients are finite").values;
            vals[vals.len() - 1]
        })
        .collect();

    // Rank-zero candidate: every cut collapses to its offset.
    let zero_val = offsets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best_y = ProjectionMatrix::zero(n);
    let mut best_val = zero_val;

    let mut lo = vec![-1.0; n];
    let hi = vec![1.0; n];
    lo[0] = 0.0;

    let root_center = center_unit(&lo, &hi);
    let root_val = value_at_unit(cuts, lambda, &root_center);
    if root_val < best_val {
        best_val = root_val;
        best_y = ProjectionMatrix::from_unit_vector(root_center)?;
    }

    let mut heap = BinaryHeap::new();
    let root_bound = node_bound(cuts, &offsets, &eig_floors, lambda, &lo, &hi);
    if root_bound < f64::INFINITY {
        heap.push(Node { bound: root_bound, lo, hi });
    }

    let mut nodes = 0usize;
    // Bounds of boxes retired at the width floor still constrain the optimum.
    let mut retired_floor = f64::INFINITY;
    let mut certified = true;

    let final_lb = loop {
        let Some(node) = heap.pop() else {
            break retired_floor.min(zero_val);
        };
        let frontier = node.bound.min(retired_floor).min(zero_val);
        if best_val - frontier <= eps_master * (1.0 + best_val.abs()) {
            break frontier;
        }
        nodes += 1;
        if nodes > node_limit {
            certified = false;
            break frontier;
        }

        let split = (0..n)
            .max_by(|&a, &b| (node.hi[a] - node.lo[a]).total_cmp(&(node.hi[b] - node.lo[b])))
            .unwrap();
        let mid = 0.5 * (node.lo[split] + node.hi[split]);
        for side in 0..2 {
            let mut clo = node.lo.clone();
            let mut chi = node.hi.clone();
            if side == 0 {
                chi[split] = mid;
            } else {
                clo[split] = mid;
            }

            let center = center_unit(&clo, &chi);
            let val = value_at_unit(cuts, lambda, &center);
            if val < best_val {
                best_val = val;
                best_y = ProjectionMatrix::from_unit_vector(center)?;
            }

            // A child's true minimum can only sit above the parent's bound.
            let bound =
                node_bound(cuts, &offsets, &eig_floors, lambda, &clo, &chi).max(node.bound);
            if bound == f64::INFINITY {
                continue;
            }
            let width = (0..n).map(|j| chi[j] - clo[j]).fold(0.0, f64::max);
            if width < WIDTH_FLOOR {
                retired_floor = retired_floor.min(bound);
            } else {
                heap.push(Node { bound, lo: clo, hi: chi });
            }
        }
    };

    let theta = final_lb.min(best_val);
    if best_val - theta > eps_master * (1.0 + best_val.abs()) {
        certified = false;
    }
    Ok(K1Master { y: best_y, value: best_val, theta, certified, nodes })
}

/// Multistart projected descent for `k >= 2`: hull steps projected back to
/// `Conv(Y)` and rounded greedily, seeded from the relaxed master solution,
/// the zero projection, and random frames. The relaxed master value is
/// returned alongside as the certified lower bound.
pub fn master_solve_heuristic(
    cuts: &[Cut],
    lambda: f64,
    n: usize,
    k: usize,
    restarts: usize,
) -> Result<HeuristicMaster, ExactError> {
    if cuts.is_empty() {
        return Err(ExactError::EmptyPool);
    }
    let mut warmth = MasterWarmth::default();
    let relaxed = relaxed_master(cuts, lambda, n, k, 1e-9, &mut warmth)?;

    let mut rng = SeedRng::new(0xb0b);
    let mut starts = vec![greedy_round(&relaxed.y, k), ProjectionMatrix::zero(n)];
    for _ in 0..restarts {
        let g = DMatrix::from_fn(n, k, |_, _| rng.normal());
        let u = spectra_core::svd_thin(&g)?.u;
        starts.push(ProjectionMatrix::from_factor(u)?);
    }

    let mut best_y = starts[0].clone();
    let mut best_val = f64::INFINITY;
    for start in starts {
        let mut y = start;
        let mut val = value_at_sym(cuts, lambda, &y.to_sym());
        let mut step = 1.0;
        for _ in 0..40 {
            let sym = y.to_sym();
            let active = cuts
                .iter()
                .max_by(|a, b| a.value_at(&sym).total_cmp(&b.value_at(&sym)))
                .unwrap();
            let mut g = active.grad.mat().clone();
            for j in 0..n {
                g[(j, j)] += lambda;
            }
            let scale = g.norm().max(1e-12);
            let moved = SymMatrix::new(sym.mat() - &g * (step / scale));
            let cand = greedy_round(&project_conv_y(&moved, k)?, k);
            let cand_val = value_at_sym(cuts, lambda, &cand.to_sym());
            if cand_val < val - 1e-12 * (1.0 + val.abs()) {
                y = cand;
                val = cand_val;
            } else {
                step *= 0.5;
                if step < 1e-4 {
                    break;
                }
            }
        }
        if val < best_val {
            best_val = val;
            best_y = y;
        }
    }

    Ok(HeuristicMaster { y: best_y, value: best_val, relaxed_lb: relaxed.lower })
}
