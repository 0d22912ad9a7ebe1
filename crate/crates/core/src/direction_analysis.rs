//! Height functions `x -> <x, e>` on a polygonal graph: up/down valences,
//! net local maxima `nlm`, multiplicity `mu(e)`, and sphere integration of `mu`.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_model::{format_f64, HalfInteger, SpatialGraph, UnitVector};
use crate::sampling::{fibonacci_lattice, map_chunks, random_direction};
use crate::vertex_curvature::Estimate;

/// Relative tolerance for perpendicular segments and tied heights.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Largest accepted fraction of rejected directions in [`integrate_mu`].
pub const MAX_REJECTION_RATE: f64 = 0.01;

/// Heights of all analysis points along `e`.
fn heights(g: &SpatialGraph, e: UnitVector) -> Vec<f64> {
    g.analysis_points()
        .iter()
        .map(|p| e.dot_point(p.position))
        .collect()
}

/// Precomputed per-graph data reused across many directions.
struct Prepared<'a> {
    g: &'a SpatialGraph,
    seg_len: Vec<f64>,
    height_tol: f64,
    tol: f64,
}

impl<'a> Prepared<'a> {
    fn new(g: &'a SpatialGraph, tol: f64) -> Self {
        let pts = g.analysis_points();
        let seg_len = g
            .segments()
            .iter()
            .map(|&(a, b)| pts[a].position.distance(pts[b].position))
            .collect();
        Prepared {
            g,
            seg_len,
            height_tol: tol * g.extent(),
            tol,
        }
    }

    fn degenerate(&self, h: &[f64]) -> bool {
        self.g
            .segments()
            .iter()
            .zip(&self.seg_len)
            .any(|(&(a, b), &len)| {
                let dh = (h[a] - h[b]).abs();
                dh <= self.tol * len || dh <= self.height_tol
            })
    }

    /// `mu(e)` doubled, or `None` when `e` is degenerate.
    fn mu_doubled(&self, e: UnitVector, h: &mut Vec<f64>) -> Option<i64> {
        h.clear();
        h.extend(
            self.g
                .analysis_points()
                .iter()
                .map(|p| e.dot_point(p.position)),
        );
        if self.degenerate(h) {
            return None;
        }
        Some(
            self.g
                .analysis_points()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let up = p.neighbors.iter().filter(|&&n| h[n] > h[i]).count() as i64;
                    (p.valence() as i64 - 2 * up).max(0)
                })
                .sum(),
        )
    }
}

/// True iff some segment is perpendicular to `e` within `tol`, or the two ends of
/// some segment have heights within `tol * extent`.
pub fn is_degenerate(g: &SpatialGraph, e: UnitVector, tol: f64) -> bool {
    Prepared::new(g, tol).degenerate(&heights(g, e))
}

fn degenerate_error(e: UnitVector) -> Error {
    Error::DegenerateDirection(e.x(), e.y(), e.z())
}

/// `(d_plus, d_minus)`: incident segments going up and going down from `point`.
pub fn up_down_valence(g: &SpatialGraph, e: UnitVector, point: usize) -> Result<(usize, usize)> {
    let pts = g.analysis_points();
    let p = pts
        .get(point)
        .ok_or_else(|| Error::UnknownPoint(point.to_string()))?;
    let h0 = e.dot_point(p.position);
    let tol = DEGENERACY_TOL * g.extent();
    let mut up = 0;
    let mut down = 0;
    for &n in &p.neighbors {
        let q = pts[n].position;
        let dh = e.dot_point(q) - h0;
        if dh.abs() <= tol || dh.abs() <= DEGENERACY_TOL * q.distance(p.position) {
            return Err(degenerate_error(e));
        }
        if dh > 0.0 {
            up += 1;
        } else {
            down += 1;
        }
    }
    Ok((up, down))
}

/// `nlm(e, q) = (d_minus - d_plus) / 2`.
pub fn nlm_at(g: &SpatialGraph, e: UnitVector, point: usize) -> Result<HalfInteger> {
    let (up, down) = up_down_valence(g, e, point)?;
    Ok(HalfInteger::from_doubled(down as i64 - up as i64))
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionRow {
    pub point: String,
    pub height: f64,
    pub d_plus: usize,
    pub d_minus: usize,
    pub nlm: HalfInteger,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionReport {
    pub direction: UnitVector,
    /// One row per analysis point, in graph order.
    pub rows: Vec<DirectionRow>,
    pub mu: HalfInteger,
}

impl DirectionReport {
    /// `sum_q [nlm(e, q)]^-`, which equals `mu(-e)`.
    pub fn negative_mass(&self) -> HalfInteger {
        self.rows.iter().map(|r| r.nlm.negative_part()).sum()
    }
}

/// Full per-point breakdown of the height function along `e`.
pub fn mu_of_direction(g: &SpatialGraph, e: UnitVector) -> Result<DirectionReport> {
    if is_degenerate(g, e, DEGENERACY_TOL) {
        return Err(degenerate_error(e));
    }
    let h = heights(g, e);
    let rows: Vec<DirectionRow> = g
        .analysis_points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d_plus = p.neighbors.iter().filter(|&&n| h[n] > h[i]).count();
            let d_minus = p.valence() - d_plus;
            DirectionRow {
                point: p.label.clone(),
                height: h[i],
                d_plus,
                d_minus,
                nlm: HalfInteger::from_doubled(d_minus as i64 - d_plus as i64),
            }
        })
        .collect();
    let mu = rows.iter().map(|r| r.nlm.positive_part()).sum();
    Ok(DirectionReport {
        direction: e,
        rows,
        mu,
    })
}

/// Result of integrating `mu` over the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuIntegral {
    #[serde(rename = "N_estimate")]
    pub n_estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub rejected: u64,
    pub seed: u64,
}

/// Monte-Carlo `N = (1/2) * integral of mu(e)` over uniform directions.
/// Degenerate directions are redrawn and counted in `rejected`.
pub fn integrate_mu(g: &SpatialGraph, samples: u64, seed: u64) -> Result<MuIntegral> {
    if samples == 0 {
        return Err(Error::BadParameter("samples must be positive".into()));
    }
    let prep = Prepared::new(g, DEGENERACY_TOL);
    let chunks = map_chunks(samples, seed, |rng, count| {
        let mut h = Vec::with_capacity(g.analysis_points().len());
        let (mut s, mut s2, mut rejected) = (0i64, 0i64, 0u64);
        let mut accepted = 0;
        while accepted < count {
            match prep.mu_doubled(random_direction(rng), &mut h) {
                Some(m) => {
                    s += m;
                    s2 += m * m;
                    accepted += 1;
                }
                None => {
                    rejected += 1;
                    // hopeless chunk: stop drawing and let the rate check fail
                    if rejected > count {
                        break;
                    }
                }
            }
        }
        (s, s2, rejected, accepted)
    });
    let (mut s, mut s2, mut rejected, mut accepted) = (0i64, 0i64, 0u64, 0u64);
    for (a, b, r, n) in chunks {
        s += a;
        s2 += b;
        rejected += r;
        accepted += n;
    }
    if rejected as f64 > MAX_REJECTION_RATE * samples as f64 || accepted < samples {
        return Err(Error::TooManyRejections { rejected, samples });
    }
    // N = 2*pi*mean(mu) = pi*mean(2*mu)
    let Estimate { estimate, stderr } =
        crate::vertex_curvature::mean_and_stderr(s, s2, samples, PI);
    Ok(MuIntegral {
        n_estimate: estimate,
        stderr,
        samples,
        rejected,
        seed,
    })
}

/// Range of `mu` over uniform random directions; degenerate draws are skipped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuRange {
    pub min: Option<HalfInteger>,
    pub max: Option<HalfInteger>,
    pub accepted: u64,
    pub rejected: u64,
}

pub fn sample_mu_range(g: &SpatialGraph, samples: u64, seed: u64) -> MuRange {
    let prep = Prepared::new(g, DEGENERACY_TOL);
    let chunks = map_chunks(samples, seed, |rng, count| {
        let mut h = Vec::with_capacity(g.analysis_points().len());
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        let (mut accepted, mut rejected) = (0u64, 0u64);
        for _ in 0..count {
            match prep.mu_doubled(random_direction(rng), &mut h) {
                Some(m) => {
                    lo = lo.min(m);
                    hi = hi.max(m);
                    accepted += 1;
                }
                None => rejected += 1,
            }
        }
        (lo, hi, accepted, rejected)
    });
    let (mut lo, mut hi, mut accepted, mut rejected) = (i64::MAX, i64::MIN, 0, 0);
    for (a, b, n, r) in chunks {
        lo = lo.min(a);
        hi = hi.max(b);
        accepted += n;
        rejected += r;
    }
    MuRange {
        min: (accepted > 0).then(|| HalfInteger::from_doubled(lo)),
        max: (accepted > 0).then(|| HalfInteger::from_doubled(hi)),
        accepted,
        rejected,
    }
}

/// `mu(e)` at one direction of a lattice; `None` marks a degenerate direction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SphereSample {
    pub direction: UnitVector,
    pub mu: Option<HalfInteger>,
}

/// `mu` on a Fibonacci lattice of `lattice` directions.
pub fn sphere_map(g: &SpatialGraph, lattice: usize) -> Vec<SphereSample> {
    let prep = Prepared::new(g, DEGENERACY_TOL);
    fibonacci_lattice(lattice)
        .into_par_iter()
        .map_init(Vec::new, |h, e| SphereSample {
            direction: e,
            mu: prep.mu_doubled(e, h).map(HalfInteger::from_doubled),
        })
        .collect()
}

/// CSV with columns `x,y,z,mu_doubled,flag`.
pub fn sphere_map_csv(samples: &[SphereSample]) -> String {
    let mut out = String::from("x,y,z,mu_doubled,flag\n");
    for s in samples {
        let (mu, flag) = match s.mu {
            Some(m) => (m.doubled().to_string(), "ok"),
            None => (String::new(), "degenerate"),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_f64(s.direction.x()),
            format_f64(s.direction.y()),
            format_f64(s.direction.z()),
            mu,
            flag
        ));
    }
    out
}

/// Uniform direction that is not degenerate for `g`, or `None` after `attempts` draws.
pub fn generic_direction<R: Rng + ?Sized>(
    g: &SpatialGraph,
    rng: &mut R,
    attempts: usize,
) -> Option<UnitVector> {
    let prep = Prepared::new(g, DEGENERACY_TOL);
    let mut h = Vec::new();
    (0..attempts)
        .map(|_| random_direction(rng))
        .find(|&e| prep.mu_doubled(e, &mut h).is_some())
}
