//! Vertex curvatures `nc`, `tc`, `mc` and whole-graph totals.
//!
//! `nc(q) = (1/4) * integral over S^2 of [sum_i chi_i(e)]^+`, where `chi_i` is
//! `-1` on the hemisphere centred at the tangent `T_i` and `+1` on the other.

mod arrangement;
mod cone;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

pub use arrangement::{
    build_arrangement, Cell, GreatCircle, SphericalArrangement, CIRCLE_MERGE_TOL, VERTEX_TOL,
    WITNESS_TOL,
};
pub use cone::{cone_objective, tc_optimize, DEFAULT_GRID, DEFAULT_RESTARTS};

use crate::error::{Error, Result};
use crate::graph_model::{PointId, SpatialGraph, UnitVector, VertexStar};
use crate::sampling::{map_chunks, mix_seed, random_direction};

/// `arccos<t1, -t2>`, the turning angle between two edges meeting at a point.
pub fn exterior_angle(t1: UnitVector, t2: UnitVector) -> f64 {
    t1.angle_to(-t2)
}

/// `nc` for a valence-3 star: `(3*pi - a12 - a23 - a31) / 2`.
pub fn nc_valence3(t: [UnitVector; 3]) -> f64 {
    let a = t[0].angle_to(t[1]) + t[1].angle_to(t[2]) + t[2].angle_to(t[0]);
    0.5 * (3.0 * PI - a)
}

/// `nc` from the exact face areas of the arrangement, for any valence.
pub fn nc_arrangement(star: &VertexStar) -> Result<f64> {
    Ok(build_arrangement(star)?.net_curvature())
}

/// Exact `nc`, with closed forms for valence 1, 2 and 3.
pub fn nc_exact(star: &VertexStar) -> Result<f64> {
    match star.tangents.as_slice() {
        [] => Err(Error::DegenerateStar),
        [_] => Ok(PI / 2.0),
        [a, b] => Ok(exterior_angle(*a, *b)),
        [a, b, c] => Ok(nc_valence3([*a, *b, *c])),
        _ => nc_arrangement(star),
    }
}

/// `[sum_i chi_i(e)]^+`.
pub fn positive_chi_sum(star: &VertexStar, e: UnitVector) -> i64 {
    star.tangents
        .iter()
        .map(|t| {
            let s = t.dot(e);
            if s > 0.0 {
                -1
            } else if s < 0.0 {
                1
            } else {
                0
            }
        })
        .sum::<i64>()
        .max(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Monte-Carlo `nc`: `pi * mean([sum chi]^+)` over uniform directions.
pub fn nc_quadrature(star: &VertexStar, samples: u64, seed: u64) -> Estimate {
    let chunks = map_chunks(samples, seed, |rng, count| {
        let mut s = 0i64;
        let mut s2 = 0i64;
        for _ in 0..count {
            let v = positive_chi_sum(star, random_direction(rng));
            s += v;
            s2 += v * v;
        }
        (s, s2)
    });
    let (s, s2) = chunks
        .into_iter()
        .fold((0i64, 0i64), |a, b| (a.0 + b.0, a.1 + b.1));
    mean_and_stderr(s, s2, samples, PI)
}

/// `scale * mean` and `scale * sd / sqrt(n)` from exact integer sums.
pub(crate) fn mean_and_stderr(sum: i64, sum_sq: i64, n: u64, scale: f64) -> Estimate {
    let n_f = n as f64;
    let mean = sum as f64 / n_f;
    let var = if n > 1 {
        ((sum_sq as f64 - n_f * mean * mean) / (n_f - 1.0)).max(0.0)
    } else {
        0.0
    };
    Estimate {
        estimate: scale * mean,
        stderr: scale * (var / n_f).sqrt(),
    }
}

/// Maximal curvature: sum of exterior angles over all tangent pairs.
pub fn mc_sum(star: &VertexStar) -> f64 {
    let t = &star.tangents;
    let mut total = 0.0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            total += exterior_angle(t[i], t[j]);
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NcMethod {
    Exact,
    Quadrature { samples: u64, seed: u64 },
}

/// `N = sum of nc` over vertices and polyline breakpoints; straight segments carry no curvature.
pub fn net_total_curvature(g: &SpatialGraph, method: NcMethod) -> Result<f64> {
    let per_point: Vec<f64> = (0..g.analysis_points().len())
        .into_par_iter()
        .map(|i| {
            let star = g.point_star(i);
            match method {
                NcMethod::Exact => nc_exact(&star),
                NcMethod::Quadrature { samples, seed } => {
                    Ok(nc_quadrature(&star, samples, mix_seed(seed, i as u64)).estimate)
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueMethod {
    Exact,
    Quadrature,
    Optimized,
}

impl ValueMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueMethod::Exact => "exact",
            ValueMethod::Quadrature => "quadrature",
            ValueMethod::Optimized => "optimized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexCurvatures {
    pub nc: f64,
    pub tc: f64,
    pub mc: f64,
    pub nc_method: ValueMethod,
    pub tc_method: ValueMethod,
    pub mc_method: ValueMethod,
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub tc_grid: usize,
    pub tc_restarts: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            tc_grid: DEFAULT_GRID,
            tc_restarts: DEFAULT_RESTARTS,
        }
    }
}

/// All three curvatures of one star.
pub fn vertex_curvatures(star: &VertexStar, opts: &ReportOptions) -> Result<VertexCurvatures> {
    let nc = nc_exact(star)?;
    let (tc, tc_method) = match star.tangents.as_slice() {
        [_] => (PI / 2.0, ValueMethod::Exact),
        [a, b] => (exterior_angle(*a, *b), ValueMethod::Exact),
        _ => (
            tc_optimize(star, opts.tc_grid, opts.tc_restarts),
            ValueMethod::Optimized,
        ),
    };
    Ok(VertexCurvatures {
        nc,
        tc,
        mc: mc_sum(star),
        nc_method: ValueMethod::Exact,
        tc_method,
        mc_method: ValueMethod::Exact,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureRow {
    pub point: String,
    /// `vertex` or `breakpoint`.
    pub kind: &'static str,
    pub valence: usize,
    #[serde(flatten)]
    pub values: VertexCurvatures,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvatureTotals {
    /// Net total curvature.
    pub net: f64,
    /// Cone total curvature; a lower bound where `tc` was optimized.
    pub cone_lower_bound: f64,
    /// Maximal total curvature.
    pub maximal: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub rows: Vec<CurvatureRow>,
    pub totals: CurvatureTotals,
}

/// Per-point curvatures for every vertex and breakpoint, plus totals.
pub fn graph_curvature_report(g: &SpatialGraph, opts: &ReportOptions) -> Result<CurvatureReport> {
    let rows: Vec<CurvatureRow> = g
        .analysis_points()
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(CurvatureRow {
                point: p.label.clone(),
                kind: match p.id {
                    PointId::Vertex(_) => "vertex",
                    PointId::Breakpoint { .. } => "breakpoint",
                },
                valence: p.valence(),
                values: vertex_curvatures(&g.point_star(i), opts)?,
            })
        })
        .collect::<Result<_>>()?;
    let totals = CurvatureTotals {
        net: rows.iter().map(|r| r.values.nc).sum(),
        cone_lower_bound: rows.iter().map(|r| r.values.tc).sum(),
        maximal: rows.iter().map(|r| r.values.mc).sum(),
    };
    Ok(CurvatureReport { rows, totals })
}

impl CurvatureReport {
    /// CSV with columns `vertex,valence,nc,tc,mc,method`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["vertex", "valence", "nc", "tc", "mc", "method"])
            .map_err(io)?;
        for r in &self.rows {
            let v = &r.values;
            w.write_record([
                r.point.clone(),
                r.valence.to_string(),
                crate::graph_model::format_f64(v.nc),
                crate::graph_model::format_f64(v.tc),
                crate::graph_model::format_f64(v.mc),
                format!(
                    "nc={};tc={};mc={}",
                    v.nc_method.as_str(),
                    v.tc_method.as_str(),
                    v.mc_method.as_str()
                ),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests;
