//! Built-in example graphs.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::geom::Point3;
use super::graph::{EdgeSpec, SpatialGraph};
use crate::curves::{circle, trefoil, TwoChordShape};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Example {
    /// Planar butterfly: two valence-3 vertices, four valence-2 wing tips.
    Butterfly,
    /// `d` rays at equal angles in the xy-plane.
    CoplanarStar { d: usize },
    /// Two orthogonal lines crossing at the origin.
    XCrossing,
    /// Regular `n`-gon circle plus a diameter chord subdivided once.
    StandardTheta { n: usize },
    /// Theta graph whose outer cycle is an `n`-segment polygonal trefoil.
    KnottedTheta { n: usize },
    /// Circle with two parallel chords twisted `twists` full turns about each other.
    TwoChord { n: usize, twists: usize },
    /// Regular planar `n`-gon.
    ConvexPolygon { n: usize },
    /// Valence-4 star with rays `T1..T4` depending on `alpha`.
    Valence4Star { alpha: f64 },
}

impl Example {
    pub const NAMES: [&'static str; 8] = [
        "butterfly",
        "coplanar_star",
        "x_crossing",
        "standard_theta",
        "knotted_theta",
        "two_chord",
        "convex_polygon",
        "valence4_star",
    ];

    /// Builds an example from its name and the optional numeric parameters.
    pub fn from_parts(
        name: &str,
        n: Option<usize>,
        twists: Option<usize>,
        alpha: Option<f64>,
    ) -> Result<Self> {
        let need_n = |default: usize| n.unwrap_or(default);
        Ok(match name {
            "butterfly" => Example::Butterfly,
            "coplanar_star" => Example::CoplanarStar { d: need_n(3) },
            "x_crossing" => Example::XCrossing,
            "standard_theta" => Example::StandardTheta { n: need_n(64) },
            "knotted_theta" => Example::KnottedTheta { n: need_n(200) },
            "two_chord" => Example::TwoChord {
                n: need_n(64),
                twists: twists.unwrap_or(1),
            },
            "convex_polygon" => Example::ConvexPolygon { n: need_n(4) },
            "valence4_star" => Example::Valence4Star {
                alpha: alpha.unwrap_or(0.5),
            },
            other => {
                return Err(Error::BadParameter(format!(
                    "unknown example `{other}` (expected one of {})",
                    Example::NAMES.join(", ")
                )))
            }
        })
    }
}

impl FromStr for Example {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Example::from_parts(s, None, None, None)
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Example::Butterfly => write!(f, "butterfly"),
            Example::CoplanarStar { d } => write!(f, "coplanar_star({d})"),
            Example::XCrossing => write!(f, "x_crossing"),
            Example::StandardTheta { n } => write!(f, "standard_theta({n})"),
            Example::KnottedTheta { n } => write!(f, "knotted_theta({n})"),
            Example::TwoChord { n, twists } => write!(f, "two_chord({n}, {twists})"),
            Example::ConvexPolygon { n } => write!(f, "convex_polygon({n})"),
            Example::Valence4Star { alpha } => write!(f, "valence4_star({alpha})"),
        }
    }
}

fn v(label: &str, p: Point3) -> (String, Point3) {
    (label.to_string(), p)
}

fn p(x: f64, y: f64, z: f64) -> Point3 {
    Point3::new(x, y, z)
}

fn star(rays: &[Point3]) -> Result<SpatialGraph> {
    let mut vertices = vec![v("c", Point3::ZERO)];
    let mut edges = Vec::new();
    for (k, r) in rays.iter().enumerate() {
        vertices.push((format!("l{k}"), *r));
        edges.push(EdgeSpec::new(format!("r{k}"), "c", format!("l{k}")));
    }
    SpatialGraph::new(vertices, edges)
}

/// Unit tangents of the valence-4 star used to separate `N` from half the minimal double-cover curvature.
pub fn valence4_tangents(alpha: f64) -> [Point3; 4] {
    [
        p(1.0, 0.0, 0.0),
        p(0.0, 1.0, 0.0),
        p(-alpha.cos(), 0.0, alpha.sin()),
        p(0.0, -alpha.cos(), -alpha.sin()),
    ]
}

pub fn generate_example(example: &Example) -> Result<SpatialGraph> {
    match *example {
        Example::Butterfly => SpatialGraph::new(
            vec![
                v("q0+", p(0.0, 1.0, 0.0)),
                v("q0-", p(0.0, -1.0, 0.0)),
                v("q1+", p(1.0, 3.0, 0.0)),
                v("q1-", p(1.0, -3.0, 0.0)),
                v("q2+", p(-1.0, 3.0, 0.0)),
                v("q2-", p(-1.0, -3.0, 0.0)),
            ],
            vec![
                EdgeSpec::new("L0", "q0-", "q0+"),
                EdgeSpec::new("L1", "q1-", "q1+"),
                EdgeSpec::new("L2", "q2-", "q2+"),
                EdgeSpec::new("a1+", "q0+", "q1+"),
                EdgeSpec::new("a2+", "q0+", "q2+"),
                EdgeSpec::new("a1-", "q0-", "q1-"),
                EdgeSpec::new("a2-", "q0-", "q2-"),
            ],
        ),
        Example::CoplanarStar { d } => {
            if d == 0 {
                return Err(Error::BadParameter("coplanar_star needs d >= 1".into()));
            }
            let rays: Vec<Point3> = (0..d)
                .map(|k| circle(2.0 * PI * k as f64 / d as f64))
                .collect();
            star(&rays)
        }
        Example::XCrossing => star(&[
            p(1.0, 0.0, 0.0),
            p(0.0, 1.0, 0.0),
            p(-1.0, 0.0, 0.0),
            p(0.0, -1.0, 0.0),
        ]),
        Example::Valence4Star { alpha } => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::BadParameter(format!(
                    "valence4_star needs 0 < alpha <= 1, got {alpha}"
                )));
            }
            star(&valence4_tangents(alpha))
        }
        Example::ConvexPolygon { n } => {
            if n < 3 {
                return Err(Error::BadParameter("convex_polygon needs n >= 3".into()));
            }
            let vertices = (0..n)
                .map(|k| (format!("v{k}"), circle(2.0 * PI * k as f64 / n as f64)))
                .collect();
            let edges = (0..n)
                .map(|k| {
                    EdgeSpec::new(
                        format!("e{k}"),
                        format!("v{k}"),
                        format!("v{}", (k + 1) % n),
                    )
                })
                .collect();
            SpatialGraph::new(vertices, edges)
        }
        Example::StandardTheta { n } => {
            if n < 4 {
                return Err(Error::BadParameter("standard_theta needs n >= 4".into()));
            }
            let upper = n - n / 2;
            let lower = n / 2;
            let arc = |m: usize, sign: f64| -> Vec<Point3> {
                (1..m)
                    .map(|k| circle(sign * PI * k as f64 / m as f64))
                    .collect()
            };
            SpatialGraph::new(
                vec![v("q+", p(1.0, 0.0, 0.0)), v("q-", p(-1.0, 0.0, 0.0))],
                vec![
                    EdgeSpec::new("upper", "q+", "q-").with_polyline(arc(upper, 1.0)),
                    EdgeSpec::new("lower", "q+", "q-").with_polyline(arc(lower, -1.0)),
                    EdgeSpec::new("chord", "q+", "q-").with_polyline(vec![Point3::ZERO]),
                ],
            )
        }
        Example::KnottedTheta { n } => {
            if n < 6 {
                return Err(Error::BadParameter("knotted_theta needs n >= 6".into()));
            }
            let first = n / 2;
            let second = n - first;
            let a: Vec<Point3> = (1..first)
                .map(|k| trefoil(PI * k as f64 / first as f64))
                .collect();
            let b: Vec<Point3> = (1..second)
                .map(|k| trefoil(-PI * k as f64 / second as f64))
                .collect();
            SpatialGraph::new(
                vec![v("q+", trefoil(0.0)), v("q-", trefoil(PI))],
                vec![
                    EdgeSpec::new("a", "q+", "q-").with_polyline(a),
                    EdgeSpec::new("b", "q+", "q-").with_polyline(b),
                    EdgeSpec::new("chord", "q+", "q-"),
                ],
            )
        }
        Example::TwoChord { n, twists } => {
            if n < 8 {
                return Err(Error::BadParameter("two_chord needs n >= 8".into()));
            }
            two_chord(n, twists)
        }
    }
}

fn two_chord(n: usize, twists: usize) -> Result<SpatialGraph> {
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
    let vertices = corners.iter().map(|(l, a)| v(l, circle(*a))).collect();
    let mut edges = Vec::new();
    for k in 0..4 {
        let (from, a0) = corners[k];
        let (to, mut a1) = corners[(k + 1) % 4];
        if a1 <= a0 {
            a1 += 2.0 * PI;
        }
        let m = ((n as f64) * (a1 - a0) / (2.0 * PI)).round().max(2.0) as usize;
        let poly = (1..m)
            .map(|j| circle(a0 + (a1 - a0) * j as f64 / m as f64))
            .collect();
        edges.push(EdgeSpec::new(format!("arc{k}"), from, to).with_polyline(poly));
    }
    for (label, sx, from, to) in [("cp", 1.0, "p-", "p+"), ("cm", -1.0, "m-", "m+")] {
        let poly = if twists == 0 {
            Vec::new()
        } else {
            let s = shape.end_height();
            let t0 = (s - shape.half_height) / (2.0 * s);
            let t1 = 1.0 - t0;
            let k = 32 * twists;
            (0..=k)
                .map(|j| shape.chord(sx, t0 + (t1 - t0) * j as f64 / k as f64))
                .collect()
        };
        edges.push(EdgeSpec::new(label, from, to).with_polyline(poly));
    }
    SpatialGraph::new(vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn butterfly_matches_construction() {
        let g = generate_example(&Example::Butterfly).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.edges().len(), 7);
        assert_eq!(g.topological_vertices(), vec!["q0+", "q0-"]);
        let star = g.vertex_star("q0+").unwrap();
        let want = [
            Point3::new(0.0, -1.0, 0.0),
            Point3::new(1.0, 2.0, 0.0) * (1.0 / 5f64.sqrt()),
            Point3::new(-1.0, 2.0, 0.0) * (1.0 / 5f64.sqrt()),
        ];
        assert_eq!(star.valence(), 3);
        for (t, w) in star.tangents.iter().zip(want) {
            assert!(t.as_point().distance(w) < 1e-15);
            assert!(t.z().abs() == 0.0);
        }
    }

    #[test]
    fn valence4_star_rays() {
        let g = generate_example(&Example::Valence4Star { alpha: 0.5 }).unwrap();
        let star = g.vertex_star("c").unwrap();
        for (t, w) in star.tangents.iter().zip(valence4_tangents(0.5)) {
            assert!(t.as_point().distance(w) < 1e-15);
        }
        assert!(generate_example(&Example::Valence4Star { alpha: 1.5 }).is_err());
        assert!(generate_example(&Example::Valence4Star { alpha: 0.0 }).is_err());
    }

    #[test]
    fn square_and_theta_shapes() {
        let sq = generate_example(&Example::ConvexPolygon { n: 4 }).unwrap();
        assert!(sq.topological_vertices().is_empty());
        assert!(sq.analysis_points().iter().all(|p| p.position.z == 0.0));
        let th = generate_example(&Example::StandardTheta { n: 64 }).unwrap();
        assert_eq!(th.topological_vertices(), vec!["q+", "q-"]);
        assert_eq!(th.analysis_points().len(), 2 + 31 + 31 + 1);
        let kt = generate_example(&Example::KnottedTheta { n: 200 }).unwrap();
        assert_eq!(kt.edges().len(), 3);
        assert!(generate_example(&Example::StandardTheta { n: 3 }).is_err());
    }

    #[test]
    fn two_chord_structure() {
        for twists in [0, 1, 2] {
            let g = generate_example(&Example::TwoChord { n: 64, twists }).unwrap();
            assert_eq!(g.topological_vertices().len(), 4);
            assert!((0..4).all(|i| g.valence(i) == 3));
        }
    }

    #[test]
    fn names_parse() {
        for name in Example::NAMES {
            let ex: Example = name.parse().unwrap();
            generate_example(&ex).unwrap();
        }
        assert!("pretzel".parse::<Example>().is_err());
    }
}
