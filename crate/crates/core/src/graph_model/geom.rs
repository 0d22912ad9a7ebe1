//! Points, unit vectors and exact half-integers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Tolerance on `| |v| - 1 |` for a [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

/// Minimum length of a polyline segment.
pub const MIN_SEGMENT_LENGTH: f64 = 1e-12;

/// A point (or free vector) in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point3, t: f64) -> Point3 {
        self + (o - self) * t
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, o: Point3) {
        *self = *self + o;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitVector(Point3);

impl UnitVector {
    pub const X: UnitVector = UnitVector(Point3::new(1.0, 0.0, 0.0));
    pub const Y: UnitVector = UnitVector(Point3::new(0.0, 1.0, 0.0));
    pub const Z: UnitVector = UnitVector(Point3::new(0.0, 0.0, 1.0));

    /// Accepts `(x, y, z)` only if it already has unit norm.
    pub fn new(x: f64, y: f64, z: f64) -> Option<Self> {
        let p = Point3::new(x, y, z);
        (p.is_finite() && (p.norm() - 1.0).abs() <= UNIT_TOL).then_some(UnitVector(p))
    }

    /// Normalizes a nonzero finite vector.
    pub fn normalize(p: Point3) -> Option<Self> {
        let n = p.norm();
        if !n.is_finite() || n <= MIN_SEGMENT_LENGTH * 1e-3 {
            return None;
        }
        Some(UnitVector(p * (1.0 / n)))
    }

    pub fn as_point(self) -> Point3 {
        self.0
    }

    pub fn x(self) -> f64 {
        self.0.x
    }

    pub fn y(self) -> f64 {
        self.0.y
    }

    pub fn z(self) -> f64 {
        self.0.z
    }

    pub fn dot(self, o: UnitVector) -> f64 {
        self.0.dot(o.0)
    }

    pub fn dot_point(self, p: Point3) -> f64 {
        self.0.dot(p)
    }

    /// Angle in `[0, pi]` between two directions. Uses `atan2` so that nearly
    /// parallel and nearly opposite pairs keep full precision.
    pub fn angle_to(self, o: UnitVector) -> f64 {
        self.0.cross(o.0).norm().atan2(self.dot(o))
    }

    /// Any unit vector orthogonal to `self`.
    pub fn orthogonal(self) -> UnitVector {
        let p = self.0;
        let helper = if p.x.abs() <= p.y.abs() && p.x.abs() <= p.z.abs() {
            Point3::new(1.0, 0.0, 0.0)
        } else if p.y.abs() <= p.z.abs() {
            Point3::new(0.0, 1.0, 0.0)
        } else {
            Point3::new(0.0, 0.0, 1.0)
        };
        UnitVector::normalize(p.cross(helper)).expect("cross with a non-parallel axis")
    }
}

impl Neg for UnitVector {
    type Output = UnitVector;
    fn neg(self) -> UnitVector {
        UnitVector(-self.0)
    }
}

impl fmt::Display for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0.x, self.0.y, self.0.z)
    }
}

/// An element of ½ℤ, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger {
    doubled: i64,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { doubled: 0 };

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInteger { doubled }
    }

    pub const fn from_integer(n: i64) -> Self {
        HalfInteger { doubled: 2 * n }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn to_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }

    pub fn positive_part(self) -> Self {
        HalfInteger {
            doubled: self.doubled.max(0),
        }
    }

    pub fn negative_part(self) -> Self {
        HalfInteger {
            doubled: (-self.doubled).max(0),
        }
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, o: HalfInteger) -> HalfInteger {
        HalfInteger::from_doubled(self.doubled + o.doubled)
    }
}

impl AddAssign for HalfInteger {
    fn add_assign(&mut self, o: HalfInteger) {
        self.doubled += o.doubled;
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger::from_doubled(-self.doubled)
    }
}

impl std::iter::Sum for HalfInteger {
    fn sum<I: Iterator<Item = HalfInteger>>(iter: I) -> Self {
        iter.fold(HalfInteger::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// Serialized as its numeric value; halves are exact in binary floating point.
impl Serialize for HalfInteger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.doubled % 2 == 0 {
            s.serialize_i64(self.doubled / 2)
        } else {
            s.serialize_f64(self.to_f64())
        }
    }
}
