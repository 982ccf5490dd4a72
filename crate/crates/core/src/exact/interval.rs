use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{QuadraticIrrational, Rational};
use crate::error::{Error, Result};

/// A subinterval of `[0, 1]` with explicit endpoint membership.
///
/// `lo == hi` is allowed only as a closed point `[p, p]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;
    fn try_from(r: RawInterval) -> Result<Self> {
        Interval::new(r.lo, r.hi, r.lo_closed, r.hi_closed)
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval {
            lo: i.lo,
            hi: i.hi,
            lo_closed: i.lo_closed,
            hi_closed: i.hi_closed,
        }
    }
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo.is_negative() || hi > Rational::one() || lo > hi {
            return Err(Error::OutOfUnitInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        if lo == hi && !(lo_closed && hi_closed) {
            return Err(Error::EmptyInterval(lo.to_string()));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Interval::new(lo, hi, false, false)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Interval::new(lo, hi, true, true)
    }

    pub fn point(p: Rational) -> Result<Self> {
        Interval::new(p.clone(), p, true, true)
    }

    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// Irrational points never coincide with endpoints, so flags are irrelevant.
    pub fn contains_irrational(&self, x: &QuadraticIrrational) -> bool {
        x.cmp_rational(&self.lo) == Ordering::Greater && x.cmp_rational(&self.hi) == Ordering::Less
    }

    /// The same endpoints with both flags cleared; `None` if degenerate.
    pub fn interior(&self) -> Option<Interval> {
        (!self.is_degenerate()).then(|| Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: false,
            hi_closed: false,
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
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

    #[test]
    fn invariants_enforced() {
        assert!(Interval::open(q(1, 2), q(1, 4)).is_err());
        assert!(Interval::open(q(-1, 8), q(1, 8)).is_err());
        assert!(Interval::closed(q(0, 1), q(9, 8)).is_err());
        assert!(Interval::open(q(1, 2), q(1, 2)).is_err());
        assert!(Interval::point(q(1, 2)).is_ok());
    }

    #[test]
    fn membership_respects_flags() {
        let i = Interval::new(q(0, 1), q(1, 8), true, false).unwrap();
        assert!(i.contains(&q(0, 1)));
        assert!(!i.contains(&q(1, 8)));
        assert!(i.contains(&q(1, 16)));
    }

    #[test]
    fn json_shape() {
        let i = Interval::new(q(15, 16), q(1, 1), false, true).unwrap();
        let j = serde_json::to_value(&i).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"lo": "15/16", "hi": "1/1", "lo_closed": false, "hi_closed": true})
        );
        let bad = serde_json::json!({"lo": "1/2", "hi": "1/4", "lo_closed": true, "hi_closed": true});
        assert!(serde_json::from_value::<Interval>(bad).is_err());
    }
}
