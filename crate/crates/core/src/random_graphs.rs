//! Random instances for property checks: stars, graphs, polygons, thetas and refinements.

use std::f64::consts::PI;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::graph_model::{EdgeSpec, Point3, SpatialGraph, UnitVector, VertexStar};
use crate::sampling::random_direction;

pub fn random_star<R: Rng + ?Sized>(rng: &mut R, d: usize) -> VertexStar {
    VertexStar::from_tangents((0..d).map(|_| random_direction(rng)).collect())
}

fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Point3 {
    Point3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

/// A proper rotation drawn uniformly (via a random unit quaternion).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> impl Fn(Point3) -> Point3 {
    let (mut w, mut x, mut y, mut z);
    loop {
        w = rng.random_range(-1.0..1.0f64);
        x = rng.random_range(-1.0..1.0f64);
        y = rng.random_range(-1.0..1.0f64);
        z = rng.random_range(-1.0..1.0f64);
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n > 0.1 && n <= 1.0 {
            w /= n;
            x /= n;
            y /= n;
            z /= n;
            break;
        }
    }
    let m = [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ];
    move |p: Point3| {
        Point3::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        )
    }
}

pub fn rotate_star(star: &VertexStar, rot: &impl Fn(Point3) -> Point3) -> VertexStar {
    VertexStar {
        position: rot(star.position),
        tangents: star
            .tangents
            .iter()
            .map(|t| UnitVector::normalize(rot(t.as_point())).expect("rotation keeps norm"))
            .collect(),
    }
}

/// Connected graph with at most `max_points` vertices plus breakpoints and
/// vertex valences at most `max_valence` (at least 2).
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    max_points: usize,
    max_valence: usize,
) -> SpatialGraph {
    assert!(max_points >= 2 && max_valence >= 2);
    let nv = rng.random_range(2..=max_points.min(12));
    let positions: Vec<Point3> = (0..nv).map(|_| random_point(rng)).collect();
    let mut valence = vec![0usize; nv];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for v in 1..nv {
        let candidates: Vec<usize> = (0..v).filter(|&u| valence[u] < max_valence).collect();
        let u = *candidates
            .choose(rng)
            .expect("a tree with valence >= 2 always has room");
        pairs.push((u, v));
        valence[u] += 1;
        valence[v] += 1;
    }
    let extra = rng.random_range(0..=nv);
    for _ in 0..extra {
        let u = rng.random_range(0..nv);
        let v = rng.random_range(0..nv);
        if u == v
            || valence[u] >= max_valence
            || valence[v] >= max_valence
            || pairs.contains(&(u, v))
            || pairs.contains(&(v, u))
        {
            continue;
        }
        pairs.push((u, v));
        valence[u] += 1;
        valence[v] += 1;
    }
    let mut budget = max_points - nv;
    let mut edges = Vec::new();
    for (k, &(u, v)) in pairs.iter().enumerate() {
        let want = rng.random_range(0..=2usize).min(budget);
        budget -= want;
        let poly = (0..want)
            .map(|j| {
                let t = (j as f64 + 1.0) / (want as f64 + 1.0);
                positions[u].lerp(positions[v], t) + random_point(rng) * 0.4
            })
            .collect();
        edges.push(
            EdgeSpec::new(format!("e{k}"), format!("v{u}"), format!("v{v}")).with_polyline(poly),
        );
    }
    let vertices = positions
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("v{i}"), *p))
        .collect();
    SpatialGraph::new(vertices, edges).expect("random graph is valid")
}

/// Closed polygon through `n >= 3` random points, stored as one loop edge.
pub fn random_closed_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpatialGraph {
    let pts: Vec<Point3> = (0..n).map(|_| random_point(rng)).collect();
    SpatialGraph::new(
        vec![("v".into(), pts[0])],
        vec![EdgeSpec::new("loop", "v", "v").with_polyline(pts[1..].to_vec())],
    )
    .expect("random polygon is valid")
}

/// Convex polygon inscribed in a random ellipse, placed in a random plane.
pub fn random_planar_convex_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpatialGraph {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let (ra, rb) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
    let rot = random_rotation(rng);
    let shift = random_point(rng);
    let pts: Vec<Point3> = angles
        .iter()
        .map(|a| rot(Point3::new(ra * a.cos(), rb * a.sin(), 0.0)) + shift)
        .collect();
    SpatialGraph::new(
        vec![("v".into(), pts[0])],
        vec![EdgeSpec::new("loop", "v", "v").with_polyline(pts[1..].to_vec())],
    )
    .expect("convex polygon is valid")
}

/// Theta graph: two junctions joined by three random polylines.
pub fn random_theta<R: Rng + ?Sized>(rng: &mut R) -> SpatialGraph {
    let a = random_point(rng);
    let b = random_point(rng) + Point3::new(2.5, 0.0, 0.0);
    let edges = (0..3)
        .map(|k| {
            let m = rng.random_range(1..=5usize);
            let poly = (0..m)
                .map(|j| a.lerp(b, (j as f64 + 1.0) / (m as f64 + 1.0)) + random_point(rng) * 0.8)
                .collect();
            EdgeSpec::new(format!("e{k}"), "q+", "q-").with_polyline(poly)
        })
        .collect();
    SpatialGraph::new(vec![("q+".into(), a), ("q-".into(), b)], edges).expect("random theta")
}

/// Moves every breakpoint of `g` by up to `eps` in each coordinate.
pub fn jitter_breakpoints<R: Rng + ?Sized>(
    rng: &mut R,
    g: &SpatialGraph,
    eps: f64,
) -> SpatialGraph {
    let edges = g
        .edge_specs()
        .into_iter()
        .map(|mut e| {
            for p in &mut e.polyline {
                *p += random_point(rng) * eps;
            }
            e
        })
        .collect();
    SpatialGraph::new(g.vertex_list(), edges).expect("jittered graph is valid")
}

/// Inserts `count` new breakpoints at random positions into random segments,
/// so every point of `g` is also a point of the result.
pub fn refine_randomly<R: Rng + ?Sized>(
    rng: &mut R,
    g: &SpatialGraph,
    count: usize,
) -> SpatialGraph {
    let mut edges = g.edge_specs();
    let vertices = g.vertex_list();
    let pos = |label: &str| vertices.iter().find(|(l, _)| l == label).expect("vertex").1;
    for _ in 0..count {
        let k = rng.random_range(0..edges.len());
        let e = &mut edges[k];
        let chain: Vec<Point3> = std::iter::once(pos(&e.from))
            .chain(e.polyline.iter().copied())
            .chain(std::iter::once(pos(&e.to)))
            .collect();
        let s = rng.random_range(0..chain.len() - 1);
        let t = rng.random_range(0.2..0.8);
        let p = chain[s].lerp(chain[s + 1], t) + random_point(rng) * 0.3;
        e.polyline.insert(s, p);
    }
    SpatialGraph::new(vertices, edges).expect("refined graph is valid")
}
