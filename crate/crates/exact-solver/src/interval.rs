//! Interval lower bounds for quadratic forms on a box intersected with the
//! unit sphere — the node relaxation of the rank-one master search.

use spectra_core::SymMatrix;

/// Absolute outward-rounding slack applied to every interval product.
const SLACK: f64 = 1e-12;
/// Boxes whose squared-norm range misses 1 by more than this cannot hold a
/// unit vector.
const SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
struct Iv {
    lo: f64,
    hi: f64,
}

impl Iv {
    fn mul(a: Iv, b: Iv) -> Iv {
        let p = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi];
        Iv {
            lo: p.iter().cloned().fold(f64::INFINITY, f64::min) - SLACK,
            hi: p.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + SLACK,
        }
    }

    fn square(a: Iv) -> Iv {
        let big = a.lo.abs().max(a.hi.abs());
        let small = if a.lo <= 0.0 && a.hi >= 0.0 {
            0.0
        } else {
            a.lo.abs().min(a.hi.abs())
        };
        // s = u^2 is never negative, so the outward slack clamps at zero.
        Iv { lo: (small * small - SLACK).max(0.0), hi: big * big + SLACK }
    }
}

/// Lower bound for `u^T H u` over `{u : lo <= u <= hi, ||u||_2 = 1}`.
///
/// Diagonal terms are minimized exactly over the slice of the simplex the
/// box permits for `s_j = u_j^2` (a fractional knapsack); off-diagonal terms
/// use plain interval products. Returns `+inf` when the box cannot reach the
/// sphere, which doubles as the pruning test.
pub fn sphere_box_quad_min(h: &SymMatrix, lo: &[f64], hi: &[f64]) -> f64 {
    let n = lo.len();
    let m = h.mat();
    debug_assert_eq!(m.nrows(), n);

    let coords: Vec<Iv> = (0..n).map(|j| Iv { lo: lo[j], hi: hi[j] }).collect();
    let squares: Vec<Iv> = coords.iter().map(|&c| Iv::square(c)).collect();
    let sum_lo: f64 = squares.iter().map(|s| s.lo).sum();
    let sum_hi: f64 = squares.iter().map(|s| s.hi).sum();
    if sum_hi < 1.0 - SPHERE_TOL || sum_lo > 1.0 + SPHERE_TOL {
        return f64::INFINITY;
    }

    // min sum_j H_jj s_j with s in the box slice of {sum s_j = 1}: start at
    // the floor and pour the remaining mass into the cheapest diagonals.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| m[(a, a)].total_cmp(&m[(b, b)]));
    let mut budget = (1.0f64.clamp(sum_lo, sum_hi)) - sum_lo;
    let mut diag = 0.0;
    for j in 0..n {
        diag += m[(j, j)] * squares[j].lo;
    }
    for &j in &order {
        if budget <= 0.0 {
            break;
        }
        let room = (squares[j].hi - squares[j].lo).min(budget);
        diag += m[(j, j)] * room;
        budget -= room;
    }

    let mut off = 0.0;
    for j in 0..n {
        for l in (j + 1)..n {
            let c = 2.0 * m[(j, l)];
            if c == 0.0 {
                continue;
            }
            let p = Iv::mul(coords[j], coords[l]);
            off += if c > 0.0 { c * p.lo } else { c * p.hi };
        }
    }
    diag + off
}
