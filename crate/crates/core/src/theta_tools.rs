//! Checks of the net-curvature and multiplicity bounds for theta graphs.

use std::f64::consts::PI;

use serde::Serialize;

use crate::direction_analysis::sample_mu_range;
use crate::error::{Error, Result};
use crate::graph_model::{HalfInteger, SpatialGraph};
use crate::vertex_curvature::{net_total_curvature, NcMethod};

/// Tolerance for the `3 pi` and `4 pi` flags.
pub const FLAG_TOL: f64 = 1e-6;
/// Band around `3 pi` reported as an equality witness.
pub const EQUALITY_TOL: f64 = 0.01;

/// Exactly two vertices, both of valence 3, joined by three edges.
///
/// Vertices of valence 2 are not absorbed: a graph that is only homeomorphic
/// to a theta, such as the butterfly, is rejected.
pub fn is_theta(g: &SpatialGraph) -> bool {
    g.vertices().len() == 2
        && g.edges().len() == 3
        && g.edges().iter().all(|e| !e.is_loop())
        && g.valence(0) == 3
        && g.valence(1) == 3
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThetaReport {
    #[serde(rename = "N")]
    pub n: f64,
    pub min_mu_sampled: HalfInteger,
    pub passes_3pi: bool,
    pub below_4pi: bool,
    /// `N` within [`EQUALITY_TOL`] of `3 pi`.
    pub equality_witness: bool,
    pub samples: u64,
    pub accepted: u64,
    pub rejected: u64,
    pub seed: u64,
}

/// Exact `N` and the smallest sampled `mu`, with the threshold flags.
pub fn check_theta_bounds(g: &SpatialGraph, samples: u64, seed: u64) -> Result<ThetaReport> {
    if !is_theta(g) {
        return Err(Error::NotTheta);
    }
    let n = net_total_curvature(g, NcMethod::Exact)?;
    let range = sample_mu_range(g, samples, seed);
    let min = range.min.ok_or(Error::TooManyRejections {
        rejected: range.rejected,
        samples,
    })?;
    Ok(ThetaReport {
        n,
        min_mu_sampled: min,
        passes_3pi: n >= 3.0 * PI - FLAG_TOL,
        below_4pi: n < 4.0 * PI - FLAG_TOL,
        equality_witness: (n - 3.0 * PI).abs() <= EQUALITY_TOL,
        samples,
        accepted: range.accepted,
        rejected: range.rejected,
        seed,
    })
}
