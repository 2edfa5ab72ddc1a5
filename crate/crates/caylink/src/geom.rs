//! Plane points and numeric tolerances.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Orientation-preserving rigid motion taking the segment `(a0, b0)` onto the ray `(a1, b1)`.
///
/// Only the direction of `b1 - a1` is used, so charts can be placed even when the
/// target segment is a few ulps longer than the chart segment.
#[derive(Debug, Clone, Copy)]
pub struct Rigid {
    cos: f64,
    sin: f64,
    from: Point,
    to: Point,
}

impl Rigid {
    pub fn aligning(a0: Point, b0: Point, a1: Point, b1: Point) -> Rigid {
        let theta = (b1 - a1).angle() - (b0 - a0).angle();
        Rigid { cos: theta.cos(), sin: theta.sin(), from: a0, to: a1 }
    }

    pub fn apply(&self, p: Point) -> Point {
        let d = p - self.from;
        self.to + Point::new(self.cos * d.x - self.sin * d.y, self.sin * d.x + self.cos * d.y)
    }
}

/// Numeric tolerances shared by realization and interval code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative slack accepted in triangle inequalities.
    pub tri: f64,
    /// Relative threshold under which an orientation counts as zero.
    pub orient: f64,
    /// Relative gap under which neighbouring intervals are merged.
    pub merge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tri: 1e-9, orient: 1e-9, merge: 1e-9 }
    }
}

impl Tolerances {
    /// Defaults, overridden by `CAYLINK_TOL` when set.
    ///
    /// The variable holds either one number applied to every field, or a comma separated
    /// list such as `tri=1e-8,orient=1e-10`. Malformed values are ignored.
    pub fn from_env() -> Tolerances {
        match std::env::var("CAYLINK_TOL") {
            Ok(s) => Tolerances::default().with_overrides(&s),
            Err(_) => Tolerances::default(),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Tolerances {
        if let Ok(v) = spec.trim().parse::<f64>() {
            if v > 0.0 {
                return Tolerances { tri: v, orient: v, merge: v };
            }
            return self;
        }
        for part in spec.split(',') {
            let Some((k, v)) = part.split_once('=') else { continue };
            let Ok(v) = v.trim().parse::<f64>() else { continue };
            if v <= 0.0 {
                continue;
            }
            match k.trim() {
                "tri" => self.tri = v,
                "orient" => self.orient = v,
                "merge" => self.merge = v,
                _ => {}
            }
        }
        self
    }
}
