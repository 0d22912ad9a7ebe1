//! Embedded piecewise-linear spatial graphs: data model, validation, JSON I/O and built-in examples.
//!
//! Valence-2 breakpoints live inside edge polylines and are not graph vertices;
//! [`SpatialGraph::analysis_points`] expands them alongside the vertices for
//! anything that needs to look at every corner.

mod generate;
mod geom;
mod graph;
mod io;

pub use generate::{generate_example, valence4_tangents, Example};
pub use geom::{HalfInteger, Point3, UnitVector, MIN_SEGMENT_LENGTH, UNIT_TOL};
pub use graph::{AnalysisPoint, Edge, EdgeSpec, PointId, SpatialGraph, Vertex, VertexStar};
pub use io::{
    format_f64, graph_to_json, load_graph, load_graph_file, load_graph_str, save_graph, GraphFormat,
};
