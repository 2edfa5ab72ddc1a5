//! Full-type QIM in extended precision, for chains of diagonal stages.
//!
//! Gaps between neighbouring intervals of the nested-quadrilateral family shrink by
//! several orders of magnitude per step and drop below `f64` resolution after about
//! six steps. The same mapping carried out with a few hundred bits keeps them apart.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

use super::fourcycle::CycleCase;
use super::qim::QimPlan;
use crate::error::{Error, Result};
use crate::graph::ConstructionPlan;
use crate::interval::{Interval, IntervalSet};
use crate::realize::Linkage;

/// Binary floating point with a per-value precision.
pub type BigFloat = FBig<HalfEven, 2>;

pub const DEFAULT_BITS: usize = 512;

#[derive(Debug, Clone)]
struct Ctx {
    bits: usize,
}

impl Ctx {
    fn num(&self, x: f64) -> BigFloat {
        BigFloat::try_from(x).expect("finite length").with_precision(self.bits).value()
    }
}

fn abs(x: BigFloat) -> BigFloat {
    if x < BigFloat::ZERO {
        -x
    } else {
        x
    }
}

fn max(a: BigFloat, b: BigFloat) -> BigFloat {
    if a >= b {
        a
    } else {
        b
    }
}

fn min(a: BigFloat, b: BigFloat) -> BigFloat {
    if a <= b {
        a
    } else {
        b
    }
}

fn hypot(a: &BigFloat, b: &BigFloat) -> BigFloat {
    (a * a + b * b).sqrt()
}

fn apex(base: &BigFloat, r1: &BigFloat, r2: &BigFloat) -> (BigFloat, BigFloat) {
    let two = base + base;
    let x = (r1 * r1 + base * base - r2 * r2) / &two;
    let prod = (r1 + r2 + base) * (r1 + r2 - base) * (r1 - r2 + base) * (r2 - r1 + base);
    let h = if prod > BigFloat::ZERO { prod.sqrt() / &two } else { BigFloat::ZERO };
    (x, h)
}

struct Curve {
    s: [BigFloat; 4],
    left: BigFloat,
    right: BigFloat,
    top: BigFloat,
    bottom: BigFloat,
}

impl Curve {
    fn new(s: [BigFloat; 4]) -> Option<Curve> {
        let [s1, s2, s3, s4] = s.clone();
        let left = max(abs(&s1 - &s4), abs(&s2 - &s3));
        let right = min(&s1 + &s4, &s2 + &s3);
        if left > right {
            return None;
        }
        let e2_hi = min(&s1 + &s2, &s3 + &s4);
        let e2_lo = max(abs(&s1 - &s2), abs(&s3 - &s4));
        let top = if &s1 + &s2 <= &s3 + &s4 {
            let (x, h) = apex(&e2_hi, &s4, &s3);
            hypot(&(x - &s1), &h)
        } else {
            let (x, h) = apex(&e2_hi, &s1, &s2);
            hypot(&(x - &s4), &h)
        };
        let bottom = if e2_lo == BigFloat::ZERO {
            (&left + &right) / BigFloat::from(2)
        } else if abs(&s1 - &s2) >= abs(&s3 - &s4) {
            let (a, b) = (min(s1.clone(), s2.clone()), max(s1.clone(), s2.clone()));
            let (ra, rb) = if s1 <= s2 { (&s4, &s3) } else { (&s3, &s4) };
            let (x, h) = apex(&(&b - &a), ra, rb);
            hypot(&(a + x), &h)
        } else {
            let (a, b) = (min(s4.clone(), s3.clone()), max(s4.clone(), s3.clone()));
            let (ra, rb) = if s4 <= s3 { (&s1, &s2) } else { (&s2, &s1) };
            let (x, h) = apex(&(&b - &a), ra, rb);
            hypot(&(a + x), &h)
        };
        let clamp = |v: BigFloat| min(max(v, left.clone()), right.clone());
        let (top, bottom) = (clamp(top), clamp(bottom));
        Some(Curve { s, left, right, top, bottom })
    }

    fn e2_at(&self, e1: &BigFloat, upper: bool) -> BigFloat {
        let [s1, s2, s3, s4] = &self.s;
        let (x0, h0) = apex(e1, s1, s4);
        let (x2, h2) = apex(e1, s2, s3);
        let h = if upper { h0 + h2 } else { h0 - h2 };
        hypot(&(x0 - x2), &h)
    }

    /// `(lo, hi, upper)` for the four arcs.
    fn arcs(&self) -> [(BigFloat, BigFloat, bool); 4] {
        [
            (self.left.clone(), self.top.clone(), true),
            (self.top.clone(), self.right.clone(), true),
            (self.bottom.clone(), self.right.clone(), false),
            (self.left.clone(), self.bottom.clone(), false),
        ]
    }
}

/// Sorted disjoint closed intervals in extended precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PreciseSet {
    pub intervals: Vec<(BigFloat, BigFloat)>,
}

impl PreciseSet {
    fn normalized(mut v: Vec<(BigFloat, BigFloat)>) -> PreciseSet {
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("no NaN"));
        let mut out: Vec<(BigFloat, BigFloat)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        PreciseSet { intervals: out }
    }

    fn clip(&self, lo: &BigFloat, hi: &BigFloat) -> PreciseSet {
        PreciseSet {
            intervals: self
                .intervals
                .iter()
                .filter_map(|(a, b)| {
                    let a = max(a.clone(), lo.clone());
                    let b = min(b.clone(), hi.clone());
                    (a <= b).then_some((a, b))
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Rounded to `f64`; neighbours closer than `f64` can resolve merge.
    pub fn to_interval_set(&self) -> IntervalSet {
        IntervalSet::with_tolerance(
            self.intervals.iter().map(|(a, b)| Interval::new(a.to_f64().value(), b.to_f64().value())).collect(),
            0.0,
        )
    }

    /// Smallest gap between neighbours relative to the larger bound, as `f64`.
    pub fn min_relative_gap(&self) -> Option<f64> {
        self.intervals
            .windows(2)
            .map(|w| ((&w[1].0 - &w[0].1) / &w[1].0).to_f64().value())
            .min_by(f64::total_cmp)
    }
}

/// Full-type QIM with `bits` of working precision.
///
/// Only plans made of bars, whose every stage relates two diagonals of one
/// quadrilateral, are supported; anything else reports `NotSupported`.
pub fn qim_full_precise(linkage: &Linkage, plan: &ConstructionPlan, bits: usize) -> Result<PreciseSet> {
    let qp = QimPlan::new(linkage, plan)?;
    if let Some(s) = plan.steps().iter().find(|s| !(plan.clusters()[s.clusters.0].is_trivial() && plan.clusters()[s.clusters.1].is_trivial())) {
        return Err(Error::NotSupported { step: s.index });
    }
    let ctx = Ctx { bits };
    let seq = plan.base_pair_sequence();
    let ranges: Vec<(BigFloat, BigFloat)> = qp
        .base_pairs
        .iter()
        .map(|e| {
            let mut lo = ctx.num(0.0);
            let mut hi: Option<BigFloat> = None;
            for s in plan.steps().iter().filter(|s| s.extreme_edge() == *e) {
                let a = ctx.num(linkage.dist(s.base.0, s.vertex).unwrap_or(f64::NAN));
                let b = ctx.num(linkage.dist(s.vertex, s.base.1).unwrap_or(f64::NAN));
                lo = max(lo, abs(&a - &b));
                let sum = a + b;
                hi = Some(match hi {
                    Some(h) => min(h, sum),
                    None => sum,
                });
            }
            (lo, hi.expect("every base pair has a step"))
        })
        .collect();
    let m = qp.base_pairs.len() - 1;
    let mut s = PreciseSet::normalized(vec![ranges[m].clone()]).clip(&ranges[m].0, &ranges[m].1);
    for i in (0..m).rev() {
        let st = &qp.stages[i];
        if st.cycle.case != CycleCase::Diagonals {
            return Err(Error::NotSupported { step: seq[i + 1].1 });
        }
        let c = st.cycle.junctions;
        let side = |a, b| ctx.num(linkage.dist(a, b).unwrap_or(f64::NAN));
        let sides = [side(c[0], c[1]), side(c[1], c[2]), side(c[2], c[3]), side(c[3], c[0])];
        let Some(curve) = Curve::new(sides) else {
            return Ok(PreciseSet { intervals: Vec::new() });
        };
        let mut out = Vec::new();
        for (lo, hi, upper) in curve.arcs() {
            for (a, b) in &s.clip(&lo, &hi).intervals {
                let (p, q) = (curve.e2_at(a, upper), curve.e2_at(b, upper));
                out.push(if p <= q { (p, q) } else { (q, p) });
            }
        }
        s = PreciseSet::normalized(out).clip(&ranges[i].0, &ranges[i].1);
    }
    Ok(s)
}
