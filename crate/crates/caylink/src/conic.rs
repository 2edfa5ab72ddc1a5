//! The Cayley–Menger curve of a quadrilateral and the interval maps built on it.
//!
//! Vertices are `q0..q3` in cyclic order with sides `s1 = |q0 q1|`, `s2 = |q1 q2|`,
//! `s3 = |q2 q3|`, `s4 = |q3 q0|` and diagonals `e1 = |q1 q3|`, `e2 = |q0 q2|`.
//! The curve lives in squared lengths `x = e1²`, `y = e2²`, where the planarity
//! condition is a polynomial quadratic in each variable. The public interface takes
//! and returns plain lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};

/// One of the four monotone pieces of the curve, bounded by consecutive extrema.
///
/// "Upper" pieces have `q0` and `q2` on opposite sides of the line `q1 q3` (the
/// larger `e2` for a given `e1`); "right" pieces have `q1` and `q3` on opposite
/// sides of the line `q0 q2`. The convex quadrilateral lies on `UpperRight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Arc {
    UpperLeft,
    UpperRight,
    LowerRight,
    LowerLeft,
}

impl Arc {
    pub const ALL: [Arc; 4] = [Arc::UpperLeft, Arc::UpperRight, Arc::LowerRight, Arc::LowerLeft];

    pub fn from_sides(upper: bool, right: bool) -> Arc {
        match (upper, right) {
            (true, false) => Arc::UpperLeft,
            (true, true) => Arc::UpperRight,
            (false, true) => Arc::LowerRight,
            (false, false) => Arc::LowerLeft,
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Arc::UpperLeft | Arc::UpperRight)
    }

    pub fn is_right(self) -> bool {
        matches!(self, Arc::UpperRight | Arc::LowerRight)
    }

    /// The same piece seen from [`QuadCurve::swapped`].
    pub fn swapped(self) -> Arc {
        Arc::from_sides(self.is_right(), self.is_upper())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcConstraint {
    Any,
    Only(Arc),
}

impl ArcConstraint {
    pub fn allows(self, a: Arc) -> bool {
        match self {
            ArcConstraint::Any => true,
            ArcConstraint::Only(b) => a == b,
        }
    }
}

/// A point of the curve in length coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub e1: f64,
    pub e2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadCurve {
    sides: [f64; 4],
    pub leftmost: CurvePoint,
    pub rightmost: CurvePoint,
    pub top: CurvePoint,
    pub bottom: CurvePoint,
}

// Apex of a triangle over the segment (0,0)-(base,0) with the given side lengths,
// always in the upper half-plane.
pub(crate) fn apex(base: f64, r1: f64, r2: f64) -> (f64, f64) {
    let x = (r1 * r1 + base * base - r2 * r2) / (2.0 * base);
    let prod = (r1 + r2 + base) * (r1 + r2 - base) * (r1 - r2 + base) * (-r1 + r2 + base);
    (x, prod.max(0.0).sqrt() / (2.0 * base))
}

/// Relative distance under which an interval end is moved onto an arc end.
pub const SNAP: f64 = 1e-13;

/// 5×5 Cayley–Menger determinant of four points given their squared distances.
/// Zero exactly when the points are coplanar (here: always, for a real planar
/// configuration).
pub fn cayley_menger(d2: &[[f64; 4]; 4]) -> f64 {
    let mut m = [[0.0f64; 5]; 5];
    for i in 1..5 {
        m[0][i] = 1.0;
        m[i][0] = 1.0;
        for j in 1..5 {
            m[i][j] = d2[i - 1][j - 1];
        }
    }
    let mut det = 1.0;
    for c in 0..5 {
        let p = (c..5).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..5 {
            let f = m[r][c] / m[c][c];
            for k in c..5 {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

impl QuadCurve {
    /// Curve of the quadrilateral with sides `(s1, s2, s3, s4)`.
    ///
    /// ```
    /// use caylink::conic::QuadCurve;
    ///
    /// let c = QuadCurve::new(8.0, 8.1, 7.9, 1.0).unwrap();
    /// assert!((c.top.e2 - 8.9).abs() < 1e-12);
    /// assert!((c.leftmost.e1 - 7.0).abs() < 1e-12);
    /// ```
    pub fn new(s1: f64, s2: f64, s3: f64, s4: f64) -> Result<QuadCurve> {
        let sides = [s1, s2, s3, s4];
        let sum: f64 = sides.iter().sum();
        let max = sides.iter().copied().fold(0.0, f64::max);
        if sides.iter().any(|&s| !(s > 0.0) || !s.is_finite()) || max > sum - max {
            return Err(Error::Unrealizable(sides));
        }
        let e1_lo = (s1 - s4).abs().max((s2 - s3).abs());
        let e1_hi = (s1 + s4).min(s2 + s3);
        let e2_lo = (s1 - s2).abs().max((s3 - s4).abs());
        let e2_hi = (s1 + s2).min(s3 + s4);
        let mut c = QuadCurve {
            sides,
            leftmost: CurvePoint { e1: e1_lo, e2: 0.0 },
            rightmost: CurvePoint { e1: e1_hi, e2: 0.0 },
            top: CurvePoint { e1: 0.0, e2: e2_hi },
            bottom: CurvePoint { e1: 0.0, e2: e2_lo },
        };
        c.leftmost.e2 = c.e2_at(e1_lo, true);
        c.rightmost.e2 = c.e2_at(e1_hi, true);
        // top: q1 or q3 lies on the segment q0 q2
        c.top.e1 = if s1 + s2 <= s3 + s4 {
            let (x, h) = apex(e2_hi, s4, s3);
            (x - s1).hypot(h)
        } else {
            let (x, h) = apex(e2_hi, s1, s2);
            (x - s4).hypot(h)
        };
        // bottom: q0 and q2 folded onto one ray from q1, or from q3
        c.bottom.e1 = if e2_lo <= 1e-12 * max {
            0.5 * (e1_lo + e1_hi)
        } else if (s1 - s2).abs() >= (s3 - s4).abs() {
            // q1 at the origin, q0 at s1 and q2 at s2 on the x-axis
            let (a, b) = (s1.min(s2), s1.max(s2));
            let (r_a, r_b) = if s1 <= s2 { (s4, s3) } else { (s3, s4) };
            let (x, h) = apex(b - a, r_a, r_b);
            (a + x).hypot(h)
        } else {
            let (a, b) = (s4.min(s3), s4.max(s3));
            let (r_a, r_b) = if s4 <= s3 { (s1, s2) } else { (s2, s1) };
            let (x, h) = apex(b - a, r_a, r_b);
            (a + x).hypot(h)
        };
        c.top.e1 = c.top.e1.clamp(e1_lo, e1_hi);
        c.bottom.e1 = c.bottom.e1.clamp(e1_lo, e1_hi);
        Ok(c)
    }

    pub fn sides(&self) -> [f64; 4] {
        self.sides
    }

    /// The same quadrilateral relabelled `q1 q2 q3 q0`, which exchanges the diagonals.
    pub fn swapped(&self) -> QuadCurve {
        let [s1, s2, s3, s4] = self.sides;
        QuadCurve::new(s2, s3, s4, s1).expect("relabelling keeps the polygon inequality")
    }

    pub fn e1_range(&self) -> Interval {
        Interval::new(self.leftmost.e1, self.rightmost.e1)
    }

    pub fn e2_range(&self) -> Interval {
        Interval::new(self.bottom.e2, self.top.e2)
    }

    /// The planarity polynomial at lengths `(e1, e2)`: the Cayley–Menger determinant of
    /// the four vertices.
    pub fn f(&self, e1: f64, e2: f64) -> f64 {
        let [s1, s2, s3, s4] = self.sides;
        let (x, y) = (e1 * e1, e2 * e2);
        let d2 = [
            [0.0, s1 * s1, y, s4 * s4],
            [s1 * s1, 0.0, s2 * s2, x],
            [y, s2 * s2, 0.0, s3 * s3],
            [s4 * s4, x, s3 * s3, 0.0],
        ];
        cayley_menger(&d2)
    }

    /// [`QuadCurve::f`] divided by the cube of the largest squared length involved.
    pub fn relative_residual(&self, e1: f64, e2: f64) -> f64 {
        let m = self.sides.iter().chain([e1, e2].iter()).fold(0.0f64, |a, &b| a.max(b * b));
        self.f(e1, e2).abs() / (m * m * m)
    }

    /// `e2` on the upper or lower half for `e1` clamped into range.
    pub fn e2_at(&self, e1: f64, upper: bool) -> f64 {
        let [s1, s2, s3, s4] = self.sides;
        let e1 = e1.clamp(self.leftmost.e1, self.rightmost.e1);
        if e1 <= 0.0 {
            return (s1 - s2).abs().max((s3 - s4).abs());
        }
        let (x0, h0) = apex(e1, s1, s4);
        let (x2, h2) = apex(e1, s2, s3);
        let h = if upper { h0 + h2 } else { h0 - h2 };
        (x0 - x2).hypot(h)
    }

    /// Range of `e1` covered by `arc`.
    pub fn arc_range(&self, arc: Arc) -> Interval {
        let (l, r, t, b) = (self.leftmost.e1, self.rightmost.e1, self.top.e1, self.bottom.e1);
        match arc {
            Arc::UpperLeft => Interval::new(l, t),
            Arc::UpperRight => Interval::new(t, r),
            Arc::LowerRight => Interval::new(b, r),
            Arc::LowerLeft => Interval::new(l, b),
        }
    }

    pub fn arc_value(&self, arc: Arc, e1: f64) -> f64 {
        self.e2_at(e1, arc.is_upper())
    }

    /// Arc holding a configuration, from its two side-of-line tests.
    pub fn arc_of_sides(upper: bool, right: bool) -> Arc {
        Arc::from_sides(upper, right)
    }
}

/// Lengths of `e2` matching `e1`, filtered by `arc`; empty outside the curve.
///
/// ```
/// use caylink::conic::{solve_other_diagonal, ArcConstraint, QuadCurve};
///
/// let c = QuadCurve::new(1.0, 1.0, 1.0, 1.0).unwrap();
/// // the square, and the rhombus folded onto one diagonal
/// let ys = solve_other_diagonal(&c, 2f64.sqrt(), ArcConstraint::Any);
/// assert_eq!(ys.len(), 2);
/// assert!(ys[0].abs() < 1e-9 && (ys[1] - 2f64.sqrt()).abs() < 1e-9);
/// ```
pub fn solve_other_diagonal(curve: &QuadCurve, e1: f64, arc: ArcConstraint) -> Vec<f64> {
    let r = curve.e1_range();
    let slack = 1e-12 * r.hi.max(1.0);
    if !(e1 >= r.lo - slack && e1 <= r.hi + slack) {
        return Vec::new();
    }
    let mut out: Vec<f64> = Vec::new();
    for a in Arc::ALL {
        if !arc.allows(a) || !curve.arc_range(a).contains_within(e1, slack) {
            continue;
        }
        let v = curve.arc_value(a, e1);
        if !out.iter().any(|&w| (w - v).abs() <= 1e-9 * v.max(1.0)) {
            out.push(v);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Image of a set of `e1` lengths on the curve, as `e2` lengths.
///
/// Each arc is monotone, so the image of an interval clipped to an arc is the
/// interval between the images of its ends.
pub fn map_intervals_diagonal(curve: &QuadCurve, src: &IntervalSet, arc: ArcConstraint) -> IntervalSet {
    let mut out = Vec::new();
    for a in Arc::ALL {
        if !arc.allows(a) {
            continue;
        }
        let range = curve.arc_range(a);
        // an end a few ulps past an arc end is that arc end; near the vertical tangents
        // the difference would otherwise open a gap of its square root
        let slack = SNAP * range.hi;
        for iv in src {
            let Some(mut c) = iv.intersect(&Interval::new(range.lo - slack, range.hi + slack)) else { continue };
            c.lo = if c.lo - range.lo <= slack { range.lo } else { c.lo.min(range.hi) };
            c.hi = if range.hi - c.hi <= slack { range.hi } else { c.hi.max(range.lo) };
            if c.lo > c.hi {
                continue;
            }
            let (p, q) = (curve.arc_value(a, c.lo), curve.arc_value(a, c.hi));
            out.push(Interval::new(p.min(q), p.max(q)));
        }
    }
    IntervalSet::new(out)
}

/// Angle between legs `a1` and `a2` when their far ends are `d` apart.
fn angle(a1: f64, a2: f64, d: f64) -> Result<f64> {
    let lo = (a1 - a2).abs();
    let hi = a1 + a2;
    let slack = 1e-9 * hi;
    if d < lo - slack || d > hi + slack {
        return Err(Error::DomainError(format!("length {d} outside [{lo}, {hi}]")));
    }
    Ok(((a1 * a1 + a2 * a2 - d * d) / (2.0 * a1 * a2)).clamp(-1.0, 1.0).acos())
}

/// Law-of-cosines transfer between two pairs of legs at a common vertex whose
/// angles differ by the constant `delta`.
///
/// ```
/// use caylink::conic::law_of_cosines_transfer;
///
/// let d = law_of_cosines_transfer(3.0, 4.0, 1.0, 1.0, 5.0, 0.0).unwrap();
/// assert!((d - 2f64.sqrt()).abs() < 1e-12);
/// ```
pub fn law_of_cosines_transfer(a1: f64, a2: f64, b1: f64, b2: f64, d: f64, delta: f64) -> Result<f64> {
    let theta = angle(a1, a2, d)?;
    Ok((b1 * b1 + b2 * b2 - 2.0 * b1 * b2 * (theta + delta).cos()).max(0.0).sqrt())
}

/// Legs and offset for [`law_of_cosines_transfer`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub delta: f64,
}

impl Transfer {
    pub fn apply(&self, d: f64) -> Result<f64> {
        law_of_cosines_transfer(self.a1, self.a2, self.b1, self.b2, d, self.delta)
    }

    /// Image of a set of lengths. The angle is monotone in `d`; the transferred
    /// length turns where `theta + delta` is a multiple of pi.
    pub fn map(&self, src: &IntervalSet) -> IntervalSet {
        let dom = Interval::new((self.a1 - self.a2).abs(), self.a1 + self.a2);
        let mut out = Vec::new();
        for iv in src {
            let Some(c) = iv.intersect(&dom) else { continue };
            let (t0, t1) = (angle(self.a1, self.a2, c.lo).unwrap(), angle(self.a1, self.a2, c.hi).unwrap());
            let (tlo, thi) = (t0.min(t1), t0.max(t1));
            let mut vals = vec![self.at_angle(tlo), self.at_angle(thi)];
            let pi = std::f64::consts::PI;
            let mut m = ((tlo + self.delta) / pi).ceil();
            while m * pi - self.delta <= thi {
                vals.push(self.at_angle(m * pi - self.delta));
                m += 1.0;
            }
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            out.push(Interval::new(lo, hi));
        }
        IntervalSet::new(out)
    }

    fn at_angle(&self, theta: f64) -> f64 {
        (self.b1 * self.b1 + self.b2 * self.b2 - 2.0 * self.b1 * self.b2 * (theta + self.delta).cos()).max(0.0).sqrt()
    }
}

/// Transfer onto the curve's `e1`, then map across to `e2`.
pub fn map_intervals_chordal(curve: &QuadCurve, transfer: &Transfer, src: &IntervalSet, arc: ArcConstraint) -> IntervalSet {
    map_intervals_diagonal(curve, &transfer.map(src), arc)
}
