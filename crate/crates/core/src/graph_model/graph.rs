use std::collections::HashMap;
use std::fmt;

use super::geom::{Point3, UnitVector, MIN_SEGMENT_LENGTH};
use crate::error::{Error, Result};
use crate::vertex_curvature::exterior_angle;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub label: String,
    pub position: Point3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub label: String,
    pub from: usize,
    pub to: usize,
    /// Interior breakpoints, in order from `from` to `to`.
    pub polyline: Vec<Point3>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Edge description in terms of vertex labels, used to build a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub label: String,
    pub from: String,
    pub to: String,
    pub polyline: Vec<Point3>,
}

impl EdgeSpec {
    pub fn new(label: impl Into<String>, from: impl Into<String>, to: impl Into<String>) -> Self {
        EdgeSpec {
            label: label.into(),
            from: from.into(),
            to: to.into(),
            polyline: Vec::new(),
        }
    }

    pub fn with_polyline(mut self, polyline: Vec<Point3>) -> Self {
        self.polyline = polyline;
        self
    }
}

/// A point where direction analysis happens: a graph vertex or a polyline breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointId {
    Vertex(usize),
    Breakpoint { edge: usize, index: usize },
}

#[derive(Debug, Clone)]
pub struct AnalysisPoint {
    pub id: PointId,
    pub label: String,
    pub position: Point3,
    /// Other endpoint of each incident segment, one entry per segment end.
    pub neighbors: Vec<usize>,
}

impl AnalysisPoint {
    pub fn valence(&self) -> usize {
        self.neighbors.len()
    }
}

/// Position of a point together with unit tangents into its incident edges.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexStar {
    pub position: Point3,
    pub tangents: Vec<UnitVector>,
}

impl VertexStar {
    /// Star at the origin with the given tangents.
    pub fn from_tangents(tangents: Vec<UnitVector>) -> Self {
        VertexStar {
            position: Point3::ZERO,
            tangents,
        }
    }

    pub fn valence(&self) -> usize {
        self.tangents.len()
    }
}

/// An embedded, connected, piecewise-linear graph in 3-space. Immutable once built.
#[derive(Debug, Clone)]
pub struct SpatialGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    point_index: HashMap<String, usize>,
    points: Vec<AnalysisPoint>,
    segments: Vec<(usize, usize)>,
}

impl PartialEq for SpatialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl SpatialGraph {
    /// Builds and validates a graph. Fails rather than repairing.
    pub fn new(vertices: Vec<(String, Point3)>, edges: Vec<EdgeSpec>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::validation("vertices", "graph has no vertices"));
        }
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        let mut verts = Vec::with_capacity(vertices.len());
        for (i, (label, p)) in vertices.into_iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::validation(
                    format!("vertices[{i}].p"),
                    "non-finite coordinate",
                ));
            }
            if vertex_index.insert(label.clone(), i).is_some() {
                return Err(Error::validation(
                    format!("vertices[{i}].id"),
                    format!("duplicate vertex label `{label}`"),
                ));
            }
            verts.push(Vertex { label, position: p });
        }

        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut es = Vec::with_capacity(edges.len());
        for (i, spec) in edges.into_iter().enumerate() {
            let from = *vertex_index.get(&spec.from).ok_or_else(|| {
                Error::validation(
                    format!("edges[{i}].from"),
                    format!("unknown vertex `{}`", spec.from),
                )
            })?;
            let to = *vertex_index.get(&spec.to).ok_or_else(|| {
                Error::validation(
                    format!("edges[{i}].to"),
                    format!("unknown vertex `{}`", spec.to),
                )
            })?;
            if edge_index.insert(spec.label.clone(), i).is_some() {
                return Err(Error::validation(
                    format!("edges[{i}].id"),
                    format!("duplicate edge label `{}`", spec.label),
                ));
            }
            if let Some(k) = spec.polyline.iter().position(|p| !p.is_finite()) {
                return Err(Error::validation(
                    format!("edges[{i}].polyline[{k}]"),
                    "non-finite coordinate",
                ));
            }
            let chain: Vec<Point3> = std::iter::once(verts[from].position)
                .chain(spec.polyline.iter().copied())
                .chain(std::iter::once(verts[to].position))
                .collect();
            for (k, w) in chain.windows(2).enumerate() {
                if w[0].distance(w[1]) <= MIN_SEGMENT_LENGTH {
                    return Err(Error::validation(
                        format!("edges[{i}].polyline[{k}]"),
                        "zero-length segment",
                    ));
                }
            }
            es.push(Edge {
                label: spec.label,
                from,
                to,
                polyline: spec.polyline,
            });
        }

        let mut points: Vec<AnalysisPoint> = verts
            .iter()
            .enumerate()
            .map(|(i, v)| AnalysisPoint {
                id: PointId::Vertex(i),
                label: v.label.clone(),
                position: v.position,
                neighbors: Vec::new(),
            })
            .collect();
        let mut segments = Vec::new();
        for (ei, e) in es.iter().enumerate() {
            let mut prev = e.from;
            for (k, p) in e.polyline.iter().enumerate() {
                let idx = points.len();
                points.push(AnalysisPoint {
                    id: PointId::Breakpoint { edge: ei, index: k },
                    label: format!("{}[{}]", e.label, k),
                    position: *p,
                    neighbors: Vec::new(),
                });
                segments.push((prev, idx));
                prev = idx;
            }
            segments.push((prev, e.to));
        }
        for &(a, b) in &segments {
            points[a].neighbors.push(b);
            points[b].neighbors.push(a);
        }

        let mut point_index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if point_index.insert(p.label.clone(), i).is_some() {
                return Err(Error::validation(
                    "points",
                    format!("label `{}` names both a vertex and a breakpoint", p.label),
                ));
            }
        }

        let g = SpatialGraph {
            vertices: verts,
            edges: es,
            vertex_index,
            edge_index,
            point_index,
            points,
            segments,
        };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.vertices.len()];
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            None => Ok(()),
            Some(i) => Err(Error::validation(
                format!("vertices[{i}]"),
                format!(
                    "graph is not connected (`{}` unreachable)",
                    self.vertices[i].label
                ),
            )),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertices followed by polyline breakpoints, edge by edge.
    pub fn analysis_points(&self) -> &[AnalysisPoint] {
        &self.points
    }

    pub fn segments(&self) -> &[(usize, usize)] {
        &self.segments
    }

    pub fn vertex_id(&self, label: &str) -> Result<usize> {
        self.vertex_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn edge_id(&self, label: &str) -> Result<usize> {
        self.edge_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(label.to_string()))
    }

    /// Index of an analysis point by label (`v` for vertices, `edge[k]` for breakpoints).
    pub fn point_id(&self, label: &str) -> Result<usize> {
        self.point_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn valence(&self, vertex: usize) -> usize {
        self.points[vertex].valence()
    }

    /// Star of any analysis point.
    pub fn point_star(&self, point: usize) -> VertexStar {
        let p = &self.points[point];
        let tangents = p
            .neighbors
            .iter()
            .map(|&n| {
                UnitVector::normalize(self.points[n].position - p.position)
                    .expect("segments have positive length")
            })
            .collect();
        VertexStar {
            position: p.position,
            tangents,
        }
    }

    /// One tangent per incident edge end; a loop contributes two.
    pub fn vertex_star(&self, label: &str) -> Result<VertexStar> {
        Ok(self.point_star(self.vertex_id(label)?))
    }

    /// Positions from `from`, through the polyline, to `to`.
    pub fn edge_chain(&self, edge: usize) -> Vec<Point3> {
        let e = &self.edges[edge];
        std::iter::once(self.vertices[e.from].position)
            .chain(e.polyline.iter().copied())
            .chain(std::iter::once(self.vertices[e.to].position))
            .collect()
    }

    /// Sum of turning angles at interior breakpoints of an edge.
    pub fn edge_interior_curvature(&self, label: &str) -> Result<f64> {
        Ok(self.edge_interior_curvature_by_id(self.edge_id(label)?))
    }

    pub fn edge_interior_curvature_by_id(&self, edge: usize) -> f64 {
        self.edge_chain(edge)
            .windows(3)
            .map(|w| {
                let back = UnitVector::normalize(w[0] - w[1]).expect("validated segment");
                let fwd = UnitVector::normalize(w[2] - w[1]).expect("validated segment");
                exterior_angle(back, fwd)
            })
            .sum()
    }

    /// Labels of vertices with valence other than 2, sorted.
    pub fn topological_vertices(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| self.valence(*i) != 2)
            .map(|(_, v)| v.label.clone())
            .collect();
        out.sort();
        out
    }

    /// Length of the bounding-box diagonal; the scale used by relative tolerances.
    pub fn extent(&self) -> f64 {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.points {
            for (k, c) in p.position.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        Point3::from_array(hi)
            .distance(Point3::from_array(lo))
            .max(f64::MIN_POSITIVE)
    }

    pub fn vertex_list(&self) -> Vec<(String, Point3)> {
        self.vertices
            .iter()
            .map(|v| (v.label.clone(), v.position))
            .collect()
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec {
                label: e.label.clone(),
                from: self.vertices[e.from].label.clone(),
                to: self.vertices[e.to].label.clone(),
                polyline: e.polyline.clone(),
            })
            .collect()
    }

    /// The subgraph with one edge deleted; must stay connected.
    pub fn remove_edge(&self, label: &str) -> Result<SpatialGraph> {
        let id = self.edge_id(label)?;
        let edges = self
            .edge_specs()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != id)
            .map(|(_, e)| e)
            .collect();
        SpatialGraph::new(self.vertex_list(), edges)
    }

    /// Applies `f` to every vertex and breakpoint position.
    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> Result<SpatialGraph> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| (v.label.clone(), f(v.position)))
            .collect();
        let edges = self
            .edge_specs()
            .into_iter()
            .map(|mut e| {
                e.polyline = e.polyline.into_iter().map(&f).collect();
                e
            })
            .collect();
        SpatialGraph::new(vertices, edges)
    }

    /// Labels of vertices adjacent to `vertex` (with repetition for multi-edges).
    pub fn neighbors_of_vertex(&self, vertex: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.from == vertex {
                out.push(e.to);
            }
            if e.to == vertex {
                out.push(e.from);
            }
        }
        out
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointId::Vertex(v) => write!(f, "v{v}"),
            PointId::Breakpoint { edge, index } => write!(f, "e{edge}[{index}]"),
        }
    }
}
