//! Numerical lower bound for the cone total curvature
//! `tc(q) = sup_e sum_i (pi/2 - arccos<T_i, e>)`.

use crate::graph_model::{Point3, UnitVector, VertexStar};
use crate::sampling::fibonacci_lattice;

pub const DEFAULT_GRID: usize = 20_000;
pub const DEFAULT_RESTARTS: usize = 16;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MIN_STEP: f64 = 1e-11;
const MAX_SWEEPS: usize = 400;

/// `sum_i asin<T_i, e>`, which equals the bracket in the definition of `tc`.
pub fn cone_objective(star: &VertexStar, e: UnitVector) -> f64 {
    star.tangents
        .iter()
        .map(|t| t.dot(e).clamp(-1.0, 1.0).asin())
        .sum()
}

fn rotate(x: UnitVector, dir: Point3, s: f64) -> UnitVector {
    UnitVector::normalize(x.as_point() * s.cos() + dir * s.sin()).unwrap_or(x)
}

/// Maximizes `s -> f(rotate(x, dir, s))` over `[-h, h]` by golden-section search.
fn line_search(star: &VertexStar, x: UnitVector, dir: Point3, h: f64) -> (f64, UnitVector) {
    let f = |s: f64| cone_objective(star, rotate(x, dir, s));
    let (mut lo, mut hi) = (-h, h);
    let mut c = hi - GOLDEN * (hi - lo);
    let mut d = lo + GOLDEN * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - GOLDEN * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + GOLDEN * (hi - lo);
            fd = f(d);
        }
        if hi - lo < MIN_STEP * 0.1 {
            break;
        }
    }
    let (s, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    (v, rotate(x, dir, s))
}

/// Pattern ascent on the tangent plane chart at the current point.
fn ascend(star: &VertexStar, start: UnitVector, initial_step: f64) -> f64 {
    let mut x = start;
    let mut fx = cone_objective(star, x);
    let mut h = initial_step;
    for _ in 0..MAX_SWEEPS {
        if h < MIN_STEP {
            break;
        }
        let a = x.orthogonal().as_point();
        let b = x.as_point().cross(a);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut improved = false;
        for dir in [a, b, (a + b) * s, (a - b) * s] {
            let (v, y) = line_search(star, x, dir, h);
            if v > fx {
                fx = v;
                x = y;
                improved = true;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    fx
}

/// Lower bound for `tc` from a Fibonacci-lattice scan of `grid` points followed by
/// golden-section ascent from the `restarts` best lattice points. The tangent
/// directions themselves are always evaluated as candidates.
pub fn tc_optimize(star: &VertexStar, grid: usize, restarts: usize) -> f64 {
    if star.tangents.is_empty() {
        return 0.0;
    }
    let lattice = fibonacci_lattice(grid.max(1));
    let mut scored: Vec<(f64, usize)> = lattice
        .iter()
        .enumerate()
        .map(|(i, &e)| (cone_objective(star, e), i))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let step = (4.0 * std::f64::consts::PI / grid.max(1) as f64).sqrt();
    let mut best = star
        .tangents
        .iter()
        .map(|&t| cone_objective(star, t))
        .fold(f64::NEG_INFINITY, f64::max);
    for &(v, i) in scored.iter().take(restarts.max(1)) {
        best = best.max(v).max(ascend(star, lattice[i], step));
    }
    best
}
