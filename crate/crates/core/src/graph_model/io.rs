//! JSON reading and canonical writing of spatial graphs.
//!
//! Document shape:
//! `{"vertices":[{"id":..,"p":[x,y,z]}..],"edges":[{"id":..,"from":..,"to":..,"polyline":[[x,y,z]..]}..]}`.
//! The writer emits every number with 17 significant digits so that
//! `load(save(g))` is bit-identical to `g`.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Deserialize;

use super::geom::Point3;
use super::graph::{EdgeSpec, SpatialGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    Json,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    p: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    from: String,
    to: String,
    #[serde(default)]
    polyline: Vec<[f64; 3]>,
}

pub fn load_graph<R: Read>(source: R, format: GraphFormat) -> Result<SpatialGraph> {
    match format {
        GraphFormat::Json => {
            let doc: GraphDoc =
                serde_json::from_reader(source).map_err(|e| Error::Parse(e.to_string()))?;
            let vertices = doc
                .vertices
                .into_iter()
                .map(|v| (v.id, Point3::from_array(v.p)))
                .collect();
            let edges = doc
                .edges
                .into_iter()
                .map(|e| EdgeSpec {
                    label: e.id,
                    from: e.from,
                    to: e.to,
                    polyline: e.polyline.into_iter().map(Point3::from_array).collect(),
                })
                .collect();
            SpatialGraph::new(vertices, edges)
        }
    }
}

pub fn load_graph_str(s: &str) -> Result<SpatialGraph> {
    load_graph(s.as_bytes(), GraphFormat::Json)
}

pub fn load_graph_file(path: &std::path::Path) -> Result<SpatialGraph> {
    let f = std::fs::File::open(path)?;
    load_graph(std::io::BufReader::new(f), GraphFormat::Json)
}

/// Decimal with 17 significant digits; round-trips every finite double.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn point_json(p: Point3) -> String {
    format!(
        "[{},{},{}]",
        format_f64(p.x),
        format_f64(p.y),
        format_f64(p.z)
    )
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Canonical serialization: one vertex or edge per line.
pub fn graph_to_json(g: &SpatialGraph) -> String {
    let mut out = String::from("{\"vertices\":[\n");
    let nv = g.vertices().len();
    for (i, v) in g.vertices().iter().enumerate() {
        let sep = if i + 1 < nv { "," } else { "" };
        let _ = writeln!(
            out,
            "{{\"id\":{},\"p\":{}}}{sep}",
            quoted(&v.label),
            point_json(v.position)
        );
    }
    out.push_str("],\"edges\":[\n");
    let ne = g.edges().len();
    for (i, e) in g.edges().iter().enumerate() {
        let sep = if i + 1 < ne { "," } else { "" };
        let poly: Vec<String> = e.polyline.iter().map(|p| point_json(*p)).collect();
        let _ = writeln!(
            out,
            "{{\"id\":{},\"from\":{},\"to\":{},\"polyline\":[{}]}}{sep}",
            quoted(&e.label),
            quoted(&g.vertices()[e.from].label),
            quoted(&g.vertices()[e.to].label),
            poly.join(",")
        );
    }
    out.push_str("]}\n");
    out
}

pub fn save_graph<W: Write>(g: &SpatialGraph, mut sink: W) -> Result<()> {
    sink.write_all(graph_to_json(g).as_bytes())?;
    Ok(())
}
