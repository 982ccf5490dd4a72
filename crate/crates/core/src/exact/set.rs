//! Finite unions of subintervals of `[0, 1]`, kept in normal form.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Interval, QuadraticIrrational, Rational};

/// Set operation selector for [`IntervalSet::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    Union,
    Intersect,
    Diff,
}

/// Sorted, pairwise disjoint, pairwise non-mergeable components.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalSet {
    components: Vec<Interval>,
}

impl From<Vec<Interval>> for IntervalSet {
    fn from(raw: Vec<Interval>) -> Self {
        IntervalSet::normalize(raw)
    }
}

impl From<IntervalSet> for Vec<Interval> {
    fn from(s: IntervalSet) -> Self {
        s.components
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn unit() -> Self {
        IntervalSet {
            components: vec![Interval::unit()],
        }
    }

    /// Sweep-merge of arbitrary intervals into normal form.
    pub fn normalize(mut raw: Vec<Interval>) -> Self {
        raw.sort_by(|a, b| {
            a.lo()
                .cmp(b.lo())
                .then_with(|| b.lo_closed().cmp(&a.lo_closed()))
        });
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for next in raw {
            let Some(cur) = out.last_mut() else {
                out.push(next);
                continue;
            };
            let touches = match next.lo().cmp(cur.hi()) {
                Ordering::Less => true,
                Ordering::Equal => cur.hi_closed() || next.lo_closed(),
                Ordering::Greater => false,
            };
            if !touches {
                out.push(next);
                continue;
            }
            let (hi, hi_closed) = match next.hi().cmp(cur.hi()) {
                Ordering::Greater => (next.hi().clone(), next.hi_closed()),
                Ordering::Equal => (cur.hi().clone(), cur.hi_closed() || next.hi_closed()),
                Ordering::Less => (cur.hi().clone(), cur.hi_closed()),
            };
            *cur = Interval::new(cur.lo().clone(), hi, cur.lo_closed(), hi_closed)
                .expect("merged interval stays valid");
        }
        IntervalSet { components: out }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalSet {
            components: vec![i],
        }
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Lebesgue measure; closure flags do not matter.
    pub fn measure(&self) -> Rational {
        self.components.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // Last component whose lo is <= x.
        let idx = self.components.partition_point(|c| c.lo() <= x);
        idx > 0 && self.components[idx - 1].contains(x)
    }

    pub fn contains_irrational(&self, x: &QuadraticIrrational) -> bool {
        let idx = self
            .components
            .partition_point(|c| x.cmp_rational(c.lo()) == Ordering::Greater);
        idx > 0 && self.components[idx - 1].contains_irrational(x)
    }

    /// Endpoints of every component, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .components
            .iter()
            .flat_map(|c| [c.lo().clone(), c.hi().clone()])
            .collect();
        pts.dedup();
        pts
    }

    pub fn apply(&self, other: &IntervalSet, op: SetOp) -> IntervalSet {
        let mut pts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
        pts.extend(self.endpoints());
        pts.extend(other.endpoints());
        pts.sort();
        pts.dedup();
        let combine = |a: bool, b: bool| match op {
            SetOp::Union => a || b,
            SetOp::Intersect => a && b,
            SetOp::Diff => a && !b,
        };
        let at_point: Vec<bool> = pts
            .iter()
            .map(|p| combine(self.contains(p), other.contains(p)))
            .collect();
        let on_cell: Vec<bool> = pts
            .windows(2)
            .map(|w| {
                let m = w[0].midpoint(&w[1]);
                combine(self.contains(&m), other.contains(&m))
            })
            .collect();
        IntervalSet::from_profile(&pts, &at_point, &on_cell)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.apply(other, SetOp::Union)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        self.apply(other, SetOp::Intersect)
    }

    pub fn diff(&self, other: &IntervalSet) -> IntervalSet {
        self.apply(other, SetOp::Diff)
    }

    pub fn complement(&self) -> IntervalSet {
        IntervalSet::unit().diff(self)
    }

    /// Builds a set from membership data on a grid `0 = p0 < p1 < ... < pn = 1`:
    /// `at_point[i]` for `p_i` and `on_cell[i]` for the open cell `(p_i, p_{i+1})`.
    pub(crate) fn from_profile(points: &[Rational], at_point: &[bool], on_cell: &[bool]) -> Self {
        debug_assert_eq!(points.len(), at_point.len());
        debug_assert_eq!(points.len(), on_cell.len() + 1);
        let mut out = Vec::new();
        let mut start: Option<(Rational, bool)> = None;
        let mut close = |start: &mut Option<(Rational, bool)>, hi: &Rational, hi_closed: bool| {
            if let Some((lo, lo_closed)) = start.take() {
                out.push(
                    Interval::new(lo, hi.clone(), lo_closed, hi_closed)
                        .expect("profile yields valid intervals"),
                );
            }
        };
        for (i, p) in points.iter().enumerate() {
            if at_point[i] {
                if start.is_none() {
                    start = Some((p.clone(), true));
                }
            } else {
                close(&mut start, p, false);
            }
            if i < on_cell.len() {
                if on_cell[i] {
                    if start.is_none() {
                        start = Some((p.clone(), false));
                    }
                } else {
                    close(&mut start, p, true);
                }
            }
        }
        if let Some(last) = points.last() {
            close(&mut start, last, true);
        }
        IntervalSet { components: out }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn iv(lo: Rational, hi: Rational, lc: bool, hc: bool) -> Interval {
        Interval::new(lo, hi, lc, hc).unwrap()
    }

    /// Grid oracle: membership of the raw union at every k/den.
    fn grid_members(raw: &[Interval], den: i64) -> Vec<bool> {
        (0..=den)
            .map(|k| raw.iter().any(|i| i.contains(&q(k, den))))
            .collect()
    }

    #[test]
    fn overlapping_open_intervals_merge() {
        let raw = vec![
            iv(q(1, 4), q(1, 2), false, false),
            iv(q(1, 3), q(2, 3), false, false),
        ];
        let s = IntervalSet::normalize(raw.clone());
        assert_eq!(s.components(), &[iv(q(1, 4), q(2, 3), false, false)]);
        // Oracle: point sets agree on a grid fine enough to see every endpoint.
        let s_members: Vec<bool> = (0..=120).map(|k| s.contains(&q(k, 120))).collect();
        assert_eq!(s_members, grid_members(&raw, 120));
    }

    #[test]
    fn empty_and_disjoint_inputs() {
        assert!(IntervalSet::normalize(vec![]).is_empty());
        let raw = vec![
            iv(q(15, 16), q(1, 1), false, true),
            iv(q(0, 1), q(1, 8), true, false),
        ];
        let s = IntervalSet::normalize(raw);
        assert_eq!(
            s.components(),
            &[
                iv(q(0, 1), q(1, 8), true, false),
                iv(q(15, 16), q(1, 1), false, true)
            ]
        );
    }

    #[test]
    fn open_touching_intervals_stay_apart() {
        let s = IntervalSet::normalize(vec![
            iv(q(0, 1), q(1, 2), false, false),
            iv(q(1, 2), q(1, 1), false, false),
        ]);
        assert_eq!(s.len(), 2);
        let t = IntervalSet::normalize(vec![
            iv(q(0, 1), q(1, 2), false, true),
            iv(q(1, 2), q(1, 1), false, false),
        ]);
        assert_eq!(t.components(), &[iv(q(0, 1), q(1, 1), false, false)]);
        let u = IntervalSet::normalize(vec![
            iv(q(0, 1), q(1, 2), false, false),
            Interval::point(q(1, 2)).unwrap(),
            iv(q(1, 2), q(1, 1), false, false),
        ]);
        assert_eq!(u.len(), 1);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(IntervalSet::empty().measure(), Rational::zero());
        assert_eq!(IntervalSet::unit().measure(), Rational::one());
        let s = IntervalSet::normalize(vec![
            iv(q(0, 1), q(1, 8), true, false),
            iv(q(15, 16), q(1, 1), false, true),
            iv(q(15, 32), q(17, 32), false, false),
        ]);
        assert_eq!(s.measure(), q(1, 4));
    }

    #[test]
    fn diff_of_disjoint_sets() {
        let a = IntervalSet::from_interval(iv(q(15, 32), q(17, 32), false, false));
        let b = IntervalSet::normalize(vec![
            iv(q(0, 1), q(1, 8), true, false),
            iv(q(15, 16), q(1, 1), false, true),
        ]);
        let d = a.diff(&b);
        assert_eq!(d, a);
        // Grid oracle over denominators <= 64.
        for den in 1..=64 {
            for k in 0..=den {
                let x = q(k, den);
                assert_eq!(d.contains(&x), a.contains(&x) && !b.contains(&x));
            }
        }
    }

    #[test]
    fn identities() {
        let s = IntervalSet::normalize(vec![
            iv(q(1, 5), q(2, 5), true, false),
            Interval::point(q(3, 4)).unwrap(),
        ]);
        assert_eq!(s.intersect(&s), s);
        assert_eq!(s.union(&IntervalSet::empty()), s);
        assert!(s.diff(&s).is_empty());
        assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn diff_keeps_flags_exact() {
        let a = IntervalSet::unit();
        let b = IntervalSet::from_interval(iv(q(1, 4), q(1, 2), true, false));
        let d = a.diff(&b);
        assert_eq!(
            d.components(),
            &[
                iv(q(0, 1), q(1, 4), true, false),
                iv(q(1, 2), q(1, 1), true, true)
            ]
        );
    }

    #[test]
    fn json_roundtrip_normalizes() {
        let j = serde_json::json!([
            {"lo": "1/3", "hi": "2/3", "lo_closed": false, "hi_closed": false},
            {"lo": "1/4", "hi": "1/2", "lo_closed": false, "hi_closed": false}
        ]);
        let s: IntervalSet = serde_json::from_value(j).unwrap();
        assert_eq!(s.len(), 1);
        let back = serde_json::to_value(&s).unwrap();
        assert_eq!(back[0]["lo"], "1/4");
    }
}
