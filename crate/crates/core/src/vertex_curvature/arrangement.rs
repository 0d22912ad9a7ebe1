//! Faces of the great-circle arrangement `{T_i^perp}` of a vertex star.
//!
//! The integrand `sum_i chi_i(e)` is constant on each face. Faces are traced on
//! the planar map formed by the circles; their areas come from the spherical
//! excess of the traced boundary.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_model::{Point3, UnitVector, VertexStar};

/// Tangents with `|T_i x T_j|` below this share one great circle.
pub const CIRCLE_MERGE_TOL: f64 = 1e-9;
/// Arrangement vertices closer than this are identified.
pub const VERTEX_TOL: f64 = 1e-9;
/// Minimum distance of a witness point from every circle.
pub const WITNESS_TOL: f64 = 1e-9;

/// A great circle `normal^perp`. Crossing it from the `normal` side to the
/// opposite side raises `sum chi_i` by `2 * weight`.
#[derive(Debug, Clone, Serialize)]
pub struct GreatCircle {
    pub normal: UnitVector,
    /// `#{T_i = +normal} - #{T_i = -normal}`.
    pub weight: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    /// Corners in traversal order (empty for a hemisphere).
    pub boundary: Vec<UnitVector>,
    /// Steradians.
    pub area: f64,
    /// `sum_i chi_i` on the cell interior.
    pub value: i64,
    pub witness: UnitVector,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphericalArrangement {
    pub circles: Vec<GreatCircle>,
    pub cells: Vec<Cell>,
}

impl SphericalArrangement {
    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// `(1/4) * sum area * max(value, 0)`.
    pub fn net_curvature(&self) -> f64 {
        0.25 * self
            .cells
            .iter()
            .map(|c| c.area * c.value.max(0) as f64)
            .sum::<f64>()
    }

    /// `sum_i chi_i(e)` computed from the merged circles.
    pub fn value_at(&self, e: UnitVector) -> i64 {
        value_at(&self.circles, e)
    }
}

fn value_at(circles: &[GreatCircle], e: UnitVector) -> i64 {
    circles
        .iter()
        .map(|c| {
            let s = c.normal.dot(e);
            if s > 0.0 {
                -c.weight
            } else if s < 0.0 {
                c.weight
            } else {
                0
            }
        })
        .sum()
}

fn merge_circles(tangents: &[UnitVector]) -> Vec<GreatCircle> {
    let mut circles: Vec<GreatCircle> = Vec::new();
    for &t in tangents {
        match circles
            .iter_mut()
            .find(|c| c.normal.as_point().cross(t.as_point()).norm() <= CIRCLE_MERGE_TOL)
        {
            Some(c) => c.weight += if c.normal.dot(t) > 0.0 { 1 } else { -1 },
            None => circles.push(GreatCircle {
                normal: t,
                weight: 1,
            }),
        }
    }
    circles
}

struct HalfEdge {
    from: usize,
    to: usize,
    /// Unit tangent of the arc at `from`.
    start_dir: Point3,
    /// Angular length of the arc.
    length: f64,
}

/// Builds the arrangement; faces are the connected components of the sphere minus the circles.
pub fn build_arrangement(star: &VertexStar) -> Result<SphericalArrangement> {
    if star.tangents.is_empty() {
        return Err(Error::DegenerateStar);
    }
    let circles = merge_circles(&star.tangents);
    if circles.len() == 1 {
        let n = circles[0].normal;
        let cells = [n, -n]
            .into_iter()
            .map(|w| Cell {
                boundary: Vec::new(),
                area: 2.0 * PI,
                value: value_at(&circles, w),
                witness: w,
            })
            .collect();
        return Ok(SphericalArrangement { circles, cells });
    }

    // arrangement vertices and the circles through each
    let mut verts: Vec<Point3> = Vec::new();
    let mut on_circle: Vec<Vec<usize>> = vec![Vec::new(); circles.len()];
    let add_vertex = |p: Point3, verts: &mut Vec<Point3>| -> usize {
        match verts.iter().position(|q| q.distance(p) <= VERTEX_TOL) {
            Some(i) => i,
            None => {
                verts.push(p);
                verts.len() - 1
            }
        }
    };
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            let c = circles[i]
                .normal
                .as_point()
                .cross(circles[j].normal.as_point());
            let p = c * (1.0 / c.norm());
            for q in [p, -p] {
                let id = add_vertex(q, &mut verts);
                for k in [i, j] {
                    if !on_circle[k].contains(&id) {
                        on_circle[k].push(id);
                    }
                }
            }
        }
    }
    for (k, c) in circles.iter().enumerate() {
        for (id, v) in verts.iter().enumerate() {
            if c.normal.dot_point(*v).abs() <= VERTEX_TOL && !on_circle[k].contains(&id) {
                on_circle[k].push(id);
            }
        }
    }

    // arcs between consecutive vertices along each circle
    let mut half_edges: Vec<HalfEdge> = Vec::new();
    for (k, c) in circles.iter().enumerate() {
        let n = c.normal.as_point();
        let u = verts[on_circle[k][0]];
        let w = n.cross(u);
        let mut ring: Vec<(f64, usize)> = on_circle[k]
            .iter()
            .map(|&id| {
                let p = verts[id];
                (p.dot(w).atan2(p.dot(u)).rem_euclid(2.0 * PI), id)
            })
            .collect();
        ring.sort_by(|a, b| a.0.total_cmp(&b.0));
        for idx in 0..ring.len() {
            let (a0, from) = ring[idx];
            let (mut a1, to) = ring[(idx + 1) % ring.len()];
            if idx + 1 == ring.len() {
                a1 += 2.0 * PI;
            }
            let length = a1 - a0;
            let fwd = n.cross(verts[from]);
            let back = -(n.cross(verts[to]));
            half_edges.push(HalfEdge {
                from,
                to,
                start_dir: fwd * (1.0 / fwd.norm()),
                length,
            });
            half_edges.push(HalfEdge {
                from: to,
                to: from,
                start_dir: back * (1.0 / back.norm()),
                length,
            });
        }
    }

    // counter-clockwise (seen from outside) order of outgoing arcs at each vertex
    let frames: Vec<(Point3, Point3)> = verts
        .iter()
        .map(|&v| {
            let a = UnitVector::normalize(v)
                .expect("vertex on sphere")
                .orthogonal()
                .as_point();
            (a, v.cross(a))
        })
        .collect();
    let dir_angle = |v: usize, t: Point3| -> f64 {
        let (a, b) = frames[v];
        t.dot(b).atan2(t.dot(a))
    };
    let mut outgoing: Vec<Vec<(f64, usize)>> = vec![Vec::new(); verts.len()];
    for (h, he) in half_edges.iter().enumerate() {
        outgoing[he.from].push((dir_angle(he.from, he.start_dir), h));
    }
    for list in &mut outgoing {
        list.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let twin = |h: usize| h ^ 1;

    let mut used = vec![false; half_edges.len()];
    let mut cells = Vec::new();
    for start in 0..half_edges.len() {
        if used[start] {
            continue;
        }
        let mut corners = Vec::new();
        let mut angles = Vec::new();
        let mut mids = Point3::ZERO;
        let mut arcs = Vec::new();
        let mut h = start;
        loop {
            used[h] = true;
            let he = &half_edges[h];
            arcs.push(h);
            let half = 0.5 * he.length;
            mids += verts[he.from] * half.cos() + he.start_dir * half.sin();
            // next arc: first outgoing arc clockwise from the way back
            let v = he.to;
            let back = twin(h);
            let list = &outgoing[v];
            let pos = list
                .iter()
                .position(|&(_, id)| id == back)
                .expect("twin leaves the arrival vertex");
            let (back_angle, _) = list[pos];
            let (next_angle, next) = list[(pos + list.len() - 1) % list.len()];
            let interior = (back_angle - next_angle).rem_euclid(2.0 * PI);
            corners.push(v);
            angles.push(interior);
            h = next;
            if h == start {
                break;
            }
        }
        let m = corners.len() as f64;
        let area = angles.iter().sum::<f64>() - (m - 2.0) * PI;
        let witness = pick_witness(
            &circles,
            mids,
            &corners,
            &angles,
            &arcs,
            &verts,
            &half_edges,
            &frames,
        );
        cells.push(Cell {
            boundary: corners
                .iter()
                .map(|&v| UnitVector::normalize(verts[v]).expect("vertex on sphere"))
                .collect(),
            area,
            value: value_at(&circles, witness),
            witness,
        });
    }
    Ok(SphericalArrangement { circles, cells })
}

fn clearance(circles: &[GreatCircle], w: UnitVector) -> f64 {
    circles
        .iter()
        .map(|c| c.normal.dot(w).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Average of the boundary arc midpoints, or a short step in from a corner if that
/// lands too close to a circle.
#[allow(clippy::too_many_arguments)]
fn pick_witness(
    circles: &[GreatCircle],
    mids: Point3,
    corners: &[usize],
    angles: &[f64],
    arcs: &[usize],
    verts: &[Point3],
    half_edges: &[HalfEdge],
    frames: &[(Point3, Point3)],
) -> UnitVector {
    let mut best: Option<(f64, UnitVector)> = None;
    let consider = |best: &mut Option<(f64, UnitVector)>, w: Option<UnitVector>| {
        if let Some(w) = w {
            let c = clearance(circles, w);
            if best.is_none_or(|(bc, _)| c > bc) {
                *best = Some((c, w));
            }
        }
    };
    consider(&mut best, UnitVector::normalize(mids));
    for (i, &v) in corners.iter().enumerate() {
        if best.is_some_and(|(c, _)| c > WITNESS_TOL) {
            break;
        }
        let incoming = &half_edges[arcs[i]];
        let back = half_edges[arcs[i] ^ 1].start_dir;
        let (a, b) = frames[v];
        let bisector = back.dot(b).atan2(back.dot(a)) - 0.5 * angles[i];
        let dir = a * bisector.cos() + b * bisector.sin();
        let mut step = 0.25 * incoming.length.min(angles[i]).min(1.0);
        for _ in 0..20 {
            consider(
                &mut best,
                UnitVector::normalize(verts[v] * step.cos() + dir * step.sin()),
            );
            step *= 0.5;
        }
    }
    best.expect("at least one candidate").1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(x: f64, y: f64, z: f64) -> UnitVector {
        UnitVector::normalize(Point3::new(x, y, z)).unwrap()
    }

    fn star(ts: &[UnitVector]) -> VertexStar {
        VertexStar::from_tangents(ts.to_vec())
    }

    #[test]
    fn single_tangent_gives_hemispheres() {
        let arr = build_arrangement(&star(&[UnitVector::X])).unwrap();
        assert_eq!(arr.cells.len(), 2);
        let mut vals: Vec<i64> = arr.cells.iter().map(|c| c.value).collect();
        vals.sort();
        assert_eq!(vals, vec![-1, 1]);
        assert!((arr.total_area() - 4.0 * PI).abs() < 1e-12);
        assert!((arr.net_curvature() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_pair_gives_four_lunes() {
        let arr = build_arrangement(&star(&[UnitVector::X, UnitVector::Y])).unwrap();
        assert_eq!(arr.cells.len(), 4);
        let mut vals: Vec<i64> = arr.cells.iter().map(|c| c.value).collect();
        vals.sort();
        assert_eq!(vals, vec![-2, 0, 0, 2]);
        for c in &arr.cells {
            assert!((c.area - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn antipodal_tangents_merge_to_inert_circle() {
        let arr = build_arrangement(&star(&[UnitVector::X, -UnitVector::X])).unwrap();
        assert_eq!(arr.circles.len(), 1);
        assert_eq!(arr.circles[0].weight, 0);
        assert!(arr.cells.iter().all(|c| c.value == 0));
    }

    #[test]
    fn generic_triple_has_eight_octant_like_cells() {
        let arr = build_arrangement(&star(&[
            uv(1.0, 0.1, 0.2),
            uv(-0.3, 1.0, 0.1),
            uv(0.2, -0.4, 1.0),
        ]))
        .unwrap();
        assert_eq!(arr.cells.len(), 8);
        assert!((arr.total_area() - 4.0 * PI).abs() < 1e-9);
        for c in &arr.cells {
            assert_eq!(c.value.rem_euclid(2), 1);
            assert!(c.value.abs() <= 3);
            assert_eq!(c.boundary.len(), 3);
        }
    }

    #[test]
    fn concurrent_circles_form_lunes() {
        // three coplanar tangents: every circle passes through the z poles
        let ts: Vec<UnitVector> = (0..3)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 3.0;
                uv(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let arr = build_arrangement(&star(&ts)).unwrap();
        assert_eq!(arr.cells.len(), 6);
        for c in &arr.cells {
            assert_eq!(c.boundary.len(), 2);
            assert!((c.area - 2.0 * PI / 3.0).abs() < 1e-12);
        }
        assert!((arr.net_curvature() - PI / 2.0).abs() < 1e-12);
    }
}
