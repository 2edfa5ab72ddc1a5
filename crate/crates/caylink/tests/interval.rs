use caylink::interval::{Interval, IntervalSet};
use proptest::prelude::*;

fn set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0.0f64..100.0, 0.0f64..10.0), 0..8)
        .prop_map(|v| IntervalSet::new(v.into_iter().map(|(a, w)| Interval::new(a, a + w)).collect()))
}

fn normalized(s: &IntervalSet) -> bool {
    s.intervals().windows(2).all(|w| w[0].hi < w[1].lo) && s.iter().all(|i| i.lo <= i.hi)
}

#[test]
fn merges_touching_and_close() {
    let s = IntervalSet::from_pairs(&[(3.0, 4.0), (1.0, 2.0), (2.0, 2.5), (4.0 + 1e-17, 5.0)]);
    assert_eq!(s, IntervalSet::from_pairs(&[(1.0, 2.5), (3.0, 5.0)]));
    assert_eq!(s.to_string(), "{[1, 2.5], [3, 5]}");
    assert_eq!(IntervalSet::empty().to_string(), "{}");
}

#[test]
fn points_and_lookup() {
    let s = IntervalSet::from_pairs(&[(1.0, 1.0), (2.0, 3.0)]);
    assert_eq!(s.endpoints(), vec![1.0, 2.0, 3.0]);
    assert_eq!(s.find(1.0), Some(0));
    assert_eq!(s.find(1.5), None);
    assert_eq!(s.find_within(3.0 + 1e-10, 1e-9), Some(1));
    assert_eq!(s.hull(), Some(Interval::new(1.0, 3.0)));
}

proptest! {
    #[test]
    fn union_and_intersection_are_pointwise(a in set(), b in set(), x in 0.0f64..110.0) {
        let u = a.union(&b);
        let i = a.intersect(&b);
        prop_assert!(normalized(&u) && normalized(&i));
        prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
        prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
    }

    #[test]
    fn intersection_is_commutative_and_bounded(a in set(), b in set()) {
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert!(a.intersect(&b).total_width() <= a.total_width().min(b.total_width()) + 1e-9);
    }

    #[test]
    fn serde_round_trip(a in set()) {
        let j = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntervalSet>(&j).unwrap(), a);
    }
}
