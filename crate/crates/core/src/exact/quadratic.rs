use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// The irrational number `p + q·√2` with `q != 0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    p: Rational,
    q: Rational,
}

impl QuadraticIrrational {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidParameter(
                "the coefficient of sqrt(2) must be nonzero".into(),
            ));
        }
        Ok(QuadraticIrrational { p, q })
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// Exact comparison of `self` against a rational.
    ///
    /// Never returns `Equal`: with `d = r - p`, the sign of `q·√2 - d` is read
    /// off the signs of `q`, `d` and `2q² - d²`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let d = r - &self.p;
        let two_q2 = self.q.square() * Rational::integer(2);
        let d2 = d.square();
        if self.q.is_positive() {
            if !d.is_positive() || two_q2 > d2 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if !d.is_negative() || two_q2 > d2 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * std::f64::consts::SQRT_2
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*sqrt(2)", self.p, self.q)
    }
}

impl fmt::Debug for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
