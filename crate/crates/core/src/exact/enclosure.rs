use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Certified rational bounds `[lo, hi]` on a real quantity.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEnclosure")]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnclosure {
    lo: Rational,
    hi: Rational,
}

impl TryFrom<RawEnclosure> for Enclosure {
    type Error = Error;
    fn try_from(r: RawEnclosure) -> Result<Self> {
        Enclosure::new(r.lo, r.hi)
    }
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "enclosure bounds out of order: {lo} > {hi}"
            )));
        }
        Ok(Enclosure { lo, hi })
    }

    /// Orders the bounds itself; use when both came from directed rounding.
    pub(crate) fn from_bounds(a: Rational, b: Rational) -> Self {
        if a <= b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    pub fn exact(x: Rational) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Widens by `r >= 0` on both sides.
    pub fn widen(&self, r: &Rational) -> Enclosure {
        Enclosure {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }

    pub fn scale(&self, k: &Rational) -> Enclosure {
        Enclosure::from_bounds(&self.lo * k, &self.hi * k)
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            Enclosure {
                lo: Rational::zero(),
                hi: self.lo.abs().max(self.hi.clone()),
            }
        }
    }

    /// Outward rounding of both bounds to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Enclosure {
        let (lo, _) = self.lo.scaled_floor_ceil(bits);
        let (_, hi) = self.hi.scaled_floor_ceil(bits);
        let scale = BigInt::from(1) << bits;
        Enclosure {
            lo: Rational::from_bigints(lo, scale.clone()).expect("nonzero scale"),
            hi: Rational::from_bigints(hi, scale).expect("nonzero scale"),
        }
    }
}

/// Enclosure of `√x` for `x >= 0` with width at most `2^-bits`.
pub fn sqrt_enclosure(x: &Rational, bits: u32) -> Result<Enclosure> {
    if x.is_negative() {
        return Err(Error::InvalidParameter(format!("square root of negative {x}")));
    }
    // √(n/d) = √(n·d)/d; scale by 4^bits before taking the integer root.
    let nd = x.numer() * x.denom();
    let scaled = nd << (2 * bits);
    let root = scaled.sqrt();
    let den = x.denom() << bits;
    let lo = Rational::from_bigints(root.clone(), den.clone())?;
    if &root * &root == scaled {
        return Ok(Enclosure::exact(lo));
    }
    let hi = Rational::from_bigints(root + 1, den)?;
    Ok(Enclosure { lo, hi })
}

/// Enclosure of `1/√x` for `x > 0` with width at most `2^-bits`.
pub fn inv_sqrt_enclosure(x: &Rational, bits: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::InvalidParameter(format!("inverse square root of {x}")));
    }
    sqrt_enclosure(&x.recip(), bits)
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        &self + &rhs
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        &self - &rhs
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Enclosure { lo, hi }
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enc(a: i64, b: i64, d: i64) -> Enclosure {
        Enclosure::new(Rational::new(a, d), Rational::new(b, d)).unwrap()
    }

    #[test]
    fn rejects_reversed_bounds() {
        assert!(Enclosure::new(Rational::one(), Rational::zero()).is_err());
    }

    #[test]
    fn arithmetic_on_signs() {
        let a = enc(-1, 2, 1);
        let b = enc(3, 4, 1);
        assert_eq!(&a * &b, enc(-4, 8, 1));
        assert_eq!(&a - &b, enc(-5, -1, 1));
        assert_eq!(a.abs(), enc(0, 2, 1));
        assert_eq!(enc(-3, -1, 1).abs(), enc(1, 3, 1));
    }

    #[test]
    fn square_roots() {
        assert_eq!(
            sqrt_enclosure(&Rational::new(1, 4), 60).unwrap(),
            Enclosure::exact(Rational::new(1, 2))
        );
        let two = sqrt_enclosure(&Rational::integer(2), 60).unwrap();
        assert!(two.width() <= Rational::pow2(-60));
        // Oracle: squares of the bounds bracket 2.
        assert!(two.lo().square() < Rational::integer(2));
        assert!(two.hi().square() > Rational::integer(2));
        let inv = inv_sqrt_enclosure(&Rational::integer(4), 60).unwrap();
        assert_eq!(inv, Enclosure::exact(Rational::new(1, 2)));
        assert!(sqrt_enclosure(&Rational::integer(-1), 8).is_err());
    }

    #[test]
    fn outward_rounding_contains_original() {
        let e = Enclosure::new(Rational::new(1, 3), Rational::new(2, 3)).unwrap();
        let r = e.round_outward(10);
        assert!(e.is_within(&r));
        assert!(r.width() <= e.width() + Rational::pow2(-9));
    }

    proptest! {
        // Widening an input never narrows the output of + or *.
        #[test]
        fn monotone_under_widening(a in -50i64..50, w in 0i64..20, b in -50i64..50, v in 0i64..20, x in 0i64..30) {
            let e1 = enc(a, a + w, 7);
            let e2 = enc(b, b + v, 5);
            let wide1 = e1.widen(&Rational::new(x, 11));
            prop_assert!((&e1 + &e2).is_within(&(&wide1 + &e2)));
            prop_assert!((&e1 * &e2).is_within(&(&wide1 * &e2)));
            prop_assert!((&e1 - &e2).is_within(&(&wide1 - &e2)));
            prop_assert!(e1.abs().is_within(&wide1.abs()));
        }
    }
}
