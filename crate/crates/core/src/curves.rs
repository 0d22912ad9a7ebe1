//! Closed-form curves shared by the polygonal generators and the parametric built-ins.

use std::f64::consts::PI;

use crate::graph_model::Point3;

/// Standard trefoil knot, `s` in `[0, 2*pi)`.
pub fn trefoil(s: f64) -> Point3 {
    Point3::new(
        s.sin() + 2.0 * (2.0 * s).sin(),
        s.cos() - 2.0 * (2.0 * s).cos(),
        -(3.0 * s).sin(),
    )
}

/// Unit circle in the xy-plane at angle `phi`.
pub fn circle(phi: f64) -> Point3 {
    Point3::new(phi.cos(), phi.sin(), 0.0)
}

/// Geometry of the circle-with-two-parallel-chords family.
#[derive(Debug, Clone, Copy)]
pub struct TwoChordShape {
    /// Chords sit at `x = +-offset`.
    pub offset: f64,
    /// Twisting happens for `|y| <= half_height`.
    pub half_height: f64,
    /// Full turns of the two chords about the y axis.
    pub turns: usize,
}

impl Default for TwoChordShape {
    fn default() -> Self {
        TwoChordShape {
            offset: 0.5,
            half_height: 0.6,
            turns: 0,
        }
    }
}

impl TwoChordShape {
    /// y-coordinate of the chord endpoints on the circle.
    pub fn end_height(&self) -> f64 {
        (1.0 - self.offset * self.offset).sqrt()
    }

    /// Angle on the circle of the chord endpoint with sign `(sx, sy)`.
    pub fn end_angle(&self, sx: f64, sy: f64) -> f64 {
        let a = self.end_height().atan2(self.offset);
        match (sx > 0.0, sy > 0.0) {
            (true, true) => a,
            (false, true) => PI - a,
            (false, false) => PI + a,
            (true, false) => 2.0 * PI - a,
        }
    }

    /// Point on the chord through `x = sx*offset` at parameter `t` in `[0, 1]`, from y < 0 to y > 0.
    /// Height along the chord is strictly increasing in `t`.
    pub fn chord(&self, sx: f64, t: f64) -> Point3 {
        let s = self.end_height();
        let y = -s + 2.0 * s * t;
        let h = self.half_height;
        let theta = if y <= -h {
            0.0
        } else if y >= h {
            2.0 * PI * self.turns as f64
        } else {
            2.0 * PI * self.turns as f64 * (y + h) / (2.0 * h)
        };
        Point3::new(
            sx * self.offset * theta.cos(),
            y,
            sx * self.offset * theta.sin(),
        )
    }
}
