//! Continuous graphs given by edge curves, their nested polygonal inscriptions,
//! and the coarsening/refinement moves between polygonal graphs.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{circle, trefoil, TwoChordShape};
use crate::direction_analysis::{is_degenerate, DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::graph_model::{format_f64, EdgeSpec, Point3, PointId, SpatialGraph, UnitVector};
use crate::vertex_curvature::{net_total_curvature, NcMethod};

pub const MAX_LEVEL: u32 = 20;
/// Endpoint agreement between a curve and its vertices.
pub const ENDPOINT_TOL: f64 = 1e-12;
/// Samples closer than this to the previous kept sample are dropped.
pub const MERGE_TOL: f64 = 1e-12;
/// Parameter-space tolerance for locating extrema.
pub const EXTREMUM_TOL: f64 = 1e-10;

/// A continuous map `[0, 1] -> R^3`.
pub trait EdgeCurve: Send + Sync + fmt::Debug {
    fn point(&self, t: f64) -> Point3;
}

#[derive(Debug, Clone, Copy)]
pub struct LineCurve {
    pub a: Point3,
    pub b: Point3,
}

impl EdgeCurve for LineCurve {
    fn point(&self, t: f64) -> Point3 {
        self.a.lerp(self.b, t)
    }
}

/// Arc of the unit circle in the xy-plane from angle `a0` to `a1`.
#[derive(Debug, Clone, Copy)]
pub struct CircleArc {
    pub a0: f64,
    pub a1: f64,
}

impl EdgeCurve for CircleArc {
    fn point(&self, t: f64) -> Point3 {
        circle(self.a0 + (self.a1 - self.a0) * t)
    }
}

/// Piece of the trefoil knot between parameters `s0` and `s1`.
#[derive(Debug, Clone, Copy)]
pub struct TrefoilArc {
    pub s0: f64,
    pub s1: f64,
}

impl EdgeCurve for TrefoilArc {
    fn point(&self, t: f64) -> Point3 {
        trefoil(self.s0 + (self.s1 - self.s0) * t)
    }
}

/// One of the two twisted chords of the two-chord family.
#[derive(Debug, Clone, Copy)]
pub struct TwistedChord {
    pub shape: TwoChordShape,
    pub sx: f64,
}

impl EdgeCurve for TwistedChord {
    fn point(&self, t: f64) -> Point3 {
        self.shape.chord(self.sx, t)
    }
}

/// Polyline with its segments spread evenly over `[0, 1]`.
#[derive(Debug, Clone)]
pub struct PolylineCurve {
    pub points: Vec<Point3>,
}

impl EdgeCurve for PolylineCurve {
    fn point(&self, t: f64) -> Point3 {
        let n = self.points.len() - 1;
        let x = t.clamp(0.0, 1.0) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        self.points[i].lerp(self.points[i + 1], x - i as f64)
    }
}

#[derive(Debug, Clone)]
pub struct ParametricEdge {
    pub label: String,
    pub from: String,
    pub to: String,
    pub curve: Arc<dyn EdgeCurve>,
}

/// A graph whose edges are continuous curves.
#[derive(Debug, Clone)]
pub struct ParametricGraph {
    vertices: Vec<(String, Point3)>,
    edges: Vec<ParametricEdge>,
}

impl ParametricGraph {
    /// Checks that each curve starts and ends at its vertices.
    pub fn new(vertices: Vec<(String, Point3)>, edges: Vec<ParametricEdge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            for (end, label, t) in [("from", &e.from, 0.0), ("to", &e.to, 1.0)] {
                let v = vertices.iter().find(|(l, _)| l == label).ok_or_else(|| {
                    Error::validation(
                        format!("edges[{i}].{end}"),
                        format!("unknown vertex `{label}`"),
                    )
                })?;
                if e.curve.point(t).distance(v.1) > ENDPOINT_TOL {
                    return Err(Error::validation(
                        format!("edges[{i}].{end}"),
                        format!("curve does not end at `{label}`"),
                    ));
                }
            }
        }
        Ok(ParametricGraph { vertices, edges })
    }

    pub fn vertices(&self) -> &[(String, Point3)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[ParametricEdge] {
        &self.edges
    }

    /// The polygonal graph viewed as a continuous one: each edge is its own polyline.
    pub fn from_polygonal(g: &SpatialGraph) -> Self {
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| ParametricEdge {
                label: e.label.clone(),
                from: g.vertices()[e.from].label.clone(),
                to: g.vertices()[e.to].label.clone(),
                curve: Arc::new(PolylineCurve {
                    points: g.edge_chain(k),
                }),
            })
            .collect();
        ParametricGraph {
            vertices: g.vertex_list(),
            edges,
        }
    }
}

fn edge(label: &str, from: &str, to: &str, curve: impl EdgeCurve + 'static) -> ParametricEdge {
    ParametricEdge {
        label: label.into(),
        from: from.into(),
        to: to.into(),
        curve: Arc::new(curve),
    }
}

/// Unit circle plus the diameter along the x axis.
pub fn circle_diameter_theta() -> ParametricGraph {
    let (a, b) = (circle(0.0), circle(PI));
    ParametricGraph::new(
        vec![("q+".into(), a), ("q-".into(), b)],
        vec![
            edge("upper", "q+", "q-", CircleArc { a0: 0.0, a1: PI }),
            edge("lower", "q+", "q-", CircleArc { a0: 0.0, a1: -PI }),
            edge("chord", "q+", "q-", LineCurve { a, b }),
        ],
    )
    .expect("built-in is consistent")
}

/// Trefoil split at two points and joined by a straight chord.
pub fn trefoil_theta() -> ParametricGraph {
    let (a, b) = (trefoil(0.0), trefoil(PI));
    ParametricGraph::new(
        vec![("q+".into(), a), ("q-".into(), b)],
        vec![
            edge("a", "q+", "q-", TrefoilArc { s0: 0.0, s1: PI }),
            edge("b", "q+", "q-", TrefoilArc { s0: 0.0, s1: -PI }),
            edge("chord", "q+", "q-", LineCurve { a, b }),
        ],
    )
    .expect("built-in is consistent")
}

/// Unit circle with two parallel chords twisted `twists` full turns about each other.
pub fn twisted_two_chord(twists: usize) -> ParametricGraph {
    let shape = TwoChordShape {
        turns: twists,
        ..Default::default()
    };
    let corners = [
        ("p+", shape.end_angle(1.0, 1.0)),
        ("m+", shape.end_angle(-1.0, 1.0)),
        ("m-", shape.end_angle(-1.0, -1.0)),
        ("p-", shape.end_angle(1.0, -1.0)),
    ];
    let mut edges = Vec::new();
    for k in 0..4 {
        let (from, a0) = corners[k];
        let (to, mut a1) = corners[(k + 1) % 4];
        if a1 <= a0 {
            a1 += 2.0 * PI;
        }
        edges.push(edge(&format!("arc{k}"), from, to, CircleArc { a0, a1 }));
    }
    edges.push(edge("cp", "p-", "p+", TwistedChord { shape, sx: 1.0 }));
    edges.push(edge("cm", "m-", "m+", TwistedChord { shape, sx: -1.0 }));
    ParametricGraph::new(
        corners
            .iter()
            .map(|(l, a)| (l.to_string(), circle(*a)))
            .collect(),
        edges,
    )
    .expect("built-in is consistent")
}

/// Unit circle as a single loop edge.
pub fn circle_loop() -> ParametricGraph {
    ParametricGraph::new(
        vec![("v".into(), circle(0.0))],
        vec![edge(
            "loop",
            "v",
            "v",
            CircleArc {
                a0: 0.0,
                a1: 2.0 * PI,
            },
        )],
    )
    .expect("built-in is consistent")
}

/// Trefoil knot as a single loop edge.
pub fn trefoil_loop() -> ParametricGraph {
    ParametricGraph::new(
        vec![("v".into(), trefoil(0.0))],
        vec![edge(
            "loop",
            "v",
            "v",
            TrefoilArc {
                s0: 0.0,
                s1: 2.0 * PI,
            },
        )],
    )
    .expect("built-in is consistent")
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "circle_diameter_theta",
    "trefoil_theta",
    "twisted_two_chord",
    "circle",
    "trefoil",
];

/// Parametric built-in by name; `twists` applies to `twisted_two_chord`.
pub fn builtin(name: &str, twists: usize) -> Result<ParametricGraph> {
    Ok(match name {
        "circle_diameter_theta" => circle_diameter_theta(),
        "trefoil_theta" => trefoil_theta(),
        "twisted_two_chord" => twisted_two_chord(twists),
        "circle" => circle_loop(),
        "trefoil" => trefoil_loop(),
        other => {
            return Err(Error::BadParameter(format!(
                "unknown parametric graph `{other}` (expected one of {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    })
}

/// A polygonal graph inscribed in a parametric one, with the curve parameter of
/// every breakpoint.
#[derive(Debug, Clone)]
pub struct Inscription {
    pub graph: SpatialGraph,
    /// Per edge, increasing parameters in `(0, 1)` of the breakpoints.
    pub params: Vec<Vec<f64>>,
}

/// Builds the inscribed graph through the given parameters, dropping samples that
/// coincide with their predecessor or with the end vertex.
fn build(pg: &ParametricGraph, params: Vec<Vec<f64>>) -> Result<Inscription> {
    let vpos = |label: &str| {
        pg.vertices
            .iter()
            .find(|(l, _)| l == label)
            .expect("validated")
            .1
    };
    let (specs, kept): (Vec<EdgeSpec>, Vec<Vec<f64>>) = pg
        .edges
        .par_iter()
        .zip(params)
        .map(|(e, ts)| {
            let start = vpos(&e.from);
            let end = vpos(&e.to);
            let mut prev = start;
            let mut poly = Vec::with_capacity(ts.len());
            let mut kept = Vec::with_capacity(ts.len());
            for t in ts {
                let p = e.curve.point(t);
                if p.distance(prev) > MERGE_TOL {
                    poly.push(p);
                    kept.push(t);
                    prev = p;
                }
            }
            while poly.last().is_some_and(|p| p.distance(end) <= MERGE_TOL) {
                poly.pop();
                kept.pop();
            }
            (
                EdgeSpec::new(e.label.clone(), e.from.clone(), e.to.clone()).with_polyline(poly),
                kept,
            )
        })
        .unzip();
    Ok(Inscription {
        graph: SpatialGraph::new(pg.vertices.clone(), specs)?,
        params: kept,
    })
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::BadParameter(format!(
            "level {level} exceeds the maximum {MAX_LEVEL}"
        )));
    }
    Ok(())
}

fn dyadic_params(level: u32) -> Vec<f64> {
    let n = 1u64 << level;
    (1..n).map(|j| j as f64 / n as f64).collect()
}

/// Dyadic inscription: every edge sampled at `2^level + 1` parameters, endpoints
/// included. Loop edges use at least level 1.
pub fn inscribe_with_params(pg: &ParametricGraph, level: u32) -> Result<Inscription> {
    check_level(level)?;
    let params = pg
        .edges
        .iter()
        .map(|e| {
            let l = if e.from == e.to { level.max(1) } else { level };
            dyadic_params(l)
        })
        .collect();
    build(pg, params)
}

pub fn inscribe(pg: &ParametricGraph, level: u32) -> Result<SpatialGraph> {
    Ok(inscribe_with_params(pg, level)?.graph)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelRow {
    pub level: u32,
    /// Vertices plus breakpoints.
    pub vertex_count: usize,
    #[serde(rename = "N")]
    pub n: f64,
}

/// `N` of the nested inscriptions at levels `0..=max_level`.
pub fn approximate_net_curvature(pg: &ParametricGraph, max_level: u32) -> Result<Vec<LevelRow>> {
    check_level(max_level)?;
    (0..=max_level)
        .map(|level| {
            let g = inscribe(pg, level)?;
            Ok(LevelRow {
                level,
                vertex_count: g.analysis_points().len(),
                n: net_total_curvature(&g, NcMethod::Exact)?,
            })
        })
        .collect()
}

/// CSV with columns `level,vertex_count,N`.
pub fn sequence_csv(rows: &[LevelRow]) -> String {
    let mut out = String::from("level,vertex_count,N\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.level,
            r.vertex_count,
            format_f64(r.n)
        ));
    }
    out
}

/// Removes a valence-2 point, joining its two neighbours by a straight segment.
/// A valence-2 vertex merges its two edges into one (keeping the first label).
pub fn straighten_vertex(g: &SpatialGraph, point: usize) -> Result<SpatialGraph> {
    let p = g
        .analysis_points()
        .get(point)
        .ok_or_else(|| Error::UnknownPoint(point.to_string()))?;
    if p.valence() != 2 {
        return Err(Error::NotRemovable(p.label.clone()));
    }
    let mut specs = g.edge_specs();
    match p.id {
        PointId::Breakpoint { edge, index } => {
            specs[edge].polyline.remove(index);
            SpatialGraph::new(g.vertex_list(), specs)
        }
        PointId::Vertex(v) => {
            let label = &g.vertices()[v].label;
            let incident: Vec<usize> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| e.from == v || e.to == v)
                .map(|(k, _)| k)
                .collect();
            let [k1, k2] = incident[..] else {
                // a single loop through the vertex: nothing to merge into
                return Err(Error::NotRemovable(p.label.clone()));
            };
            // orient the first edge to end at v and the second to start at v
            let oriented = |k: usize, end_at_v: bool| {
                let e = &specs[k];
                let mut poly = e.polyline.clone();
                let (mut a, mut b) = (e.from.clone(), e.to.clone());
                if (e.to == *label) != end_at_v {
                    poly.reverse();
                    std::mem::swap(&mut a, &mut b);
                }
                (a, b, poly)
            };
            let (u, _, mut poly) = oriented(k1, true);
            let (_, w, tail) = oriented(k2, false);
            poly.extend(tail);
            let merged = EdgeSpec::new(specs[k1].label.clone(), u, w).with_polyline(poly);
            specs[k1] = merged;
            specs.remove(k2);
            let vertices = g
                .vertex_list()
                .into_iter()
                .filter(|(l, _)| l != label)
                .collect();
            SpatialGraph::new(vertices, specs)
        }
    }
}

/// Golden-section maximization of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const G: f64 = 0.618_033_988_749_894_9;
    let mut c = b - G * (b - a);
    let mut d = a + G * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > EXTREMUM_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - G * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + G * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

const SCAN: usize = 64;

/// Interior parameter in `(a, b)` where `f` attains its maximum over `[a, b]`, if any.
fn interior_argmax(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    let ts: Vec<f64> = (0..=SCAN)
        .map(|i| a + (b - a) * i as f64 / SCAN as f64)
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let i = (0..=SCAN).fold(0, |best, i| if vals[i] > vals[best] { i } else { best });
    let lo = ts[i.saturating_sub(1)];
    let hi = ts[(i + 1).min(SCAN)];
    let t = golden_max(f, lo, hi);
    let ft = f(t);
    if t - a <= EXTREMUM_TOL || b - t <= EXTREMUM_TOL || ft <= f(a) || ft <= f(b) {
        None
    } else {
        Some(t)
    }
}

/// Refines `p` by adding, on every arc between consecutive points, the interior
/// parameters where the height `<e, .>` is largest and smallest.
pub fn direction_refinement(
    p: &Inscription,
    pg: &ParametricGraph,
    e: UnitVector,
) -> Result<Inscription> {
    let params: Vec<Vec<f64>> = pg
        .edges
        .par_iter()
        .zip(&p.params)
        .map(|(edge, ts)| {
            let h = |t: f64| e.dot_point(edge.curve.point(t));
            let neg = |t: f64| -h(t);
            let knots: Vec<f64> = std::iter::once(0.0)
                .chain(ts.iter().copied())
                .chain(std::iter::once(1.0))
                .collect();
            let mut out = Vec::with_capacity(ts.len() + 4);
            for w in knots.windows(2) {
                let mut extra: Vec<f64> = [
                    interior_argmax(&h, w[0], w[1]),
                    interior_argmax(&neg, w[0], w[1]),
                ]
                .into_iter()
                .flatten()
                .collect();
                extra.sort_by(f64::total_cmp);
                out.extend(extra);
                if w[1] < 1.0 {
                    out.push(w[1]);
                }
            }
            out.dedup_by(|a, b| (*a - *b).abs() <= EXTREMUM_TOL);
            out
        })
        .collect();
    let refined = build(pg, params)?;
    if is_degenerate(&refined.graph, e, DEGENERACY_TOL) {
        return Err(Error::DegenerateDirection(e.x(), e.y(), e.z()));
    }
    Ok(refined)
}
