//! Closed intervals and normalized unions of them.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Closed interval `[lo, hi]`; `lo == hi` is an isolated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// # Panics
    ///
    /// Panics if `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Membership with `tol` absolute slack on both ends.
    pub fn contains_within(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Default relative gap under which neighbouring intervals merge: a few ulps, enough
/// to absorb rounding where two images meet.
pub const MERGE_TOL: f64 = 1e-15;

/// Sorted, pairwise disjoint closed intervals.
///
/// ```
/// use caylink::interval::{Interval, IntervalSet};
///
/// let a = IntervalSet::from_pairs(&[(1.0, 2.0), (4.0, 6.0)]);
/// let b = IntervalSet::single(Interval::new(1.5, 5.0));
/// assert_eq!(a.intersect(&b), IntervalSet::from_pairs(&[(1.5, 2.0), (4.0, 5.0)]));
/// ```
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet::default()
    }

    pub fn single(i: Interval) -> IntervalSet {
        IntervalSet { intervals: vec![i] }
    }

    /// Normalizes with [`MERGE_TOL`].
    pub fn new(intervals: Vec<Interval>) -> IntervalSet {
        IntervalSet::with_tolerance(intervals, MERGE_TOL)
    }

    /// Sorts and merges intervals whose gap is at most `tol` times the larger of 1 and
    /// the magnitude at the gap.
    pub fn with_tolerance(mut intervals: Vec<Interval>, tol: f64) -> IntervalSet {
        intervals.retain(|i| !i.lo.is_nan() && !i.hi.is_nan());
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
        for i in intervals {
            match out.last_mut() {
                Some(last) if i.lo - last.hi <= tol * last.hi.abs().max(1.0) => last.hi = last.hi.max(i.hi),
                _ => out.push(i),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::new(pairs.iter().map(|&(a, b)| Interval::new(a, b)).collect())
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Re-merges with a different tolerance.
    pub fn normalized(&self, tol: f64) -> IntervalSet {
        IntervalSet::with_tolerance(self.intervals.clone(), tol)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        IntervalSet::new(v)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = (&self.intervals[i], &other.intervals[j]);
            if let Some(c) = a.intersect(b) {
                out.push(c);
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::new(out)
    }

    pub fn clip(&self, lo: f64, hi: f64) -> IntervalSet {
        self.intersect(&IntervalSet::single(Interval::new(lo, hi)))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.find(x).is_some()
    }

    /// Index of the interval containing `x`.
    pub fn find(&self, x: f64) -> Option<usize> {
        let i = self.intervals.partition_point(|iv| iv.hi < x);
        (i < self.intervals.len() && self.intervals[i].lo <= x).then_some(i)
    }

    /// Index of the interval within `tol` of `x`, preferring one that contains it.
    pub fn find_within(&self, x: f64, tol: f64) -> Option<usize> {
        self.find(x).or_else(|| {
            self.intervals
                .iter()
                .enumerate()
                .filter(|(_, iv)| iv.contains_within(x, tol))
                .min_by(|a, b| {
                    let da = (a.1.lo - x).abs().min((a.1.hi - x).abs());
                    let db = (b.1.lo - x).abs().min((b.1.hi - x).abs());
                    da.total_cmp(&db)
                })
                .map(|(i, _)| i)
        })
    }

    /// Smallest interval covering the set.
    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(self.intervals.first()?.lo, self.intervals.last()?.hi))
    }

    /// All interval bounds in ascending order, isolated points once.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.intervals.len());
        for i in &self.intervals {
            v.push(i.lo);
            if !i.is_point() {
                v.push(i.hi);
            }
        }
        v
    }

    pub fn total_width(&self) -> f64 {
        self.intervals.iter().map(Interval::width).sum()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.intervals.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> IntervalSet {
        IntervalSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a IntervalSet {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;

    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}
