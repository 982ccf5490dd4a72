//! Arbitrary-precision rationals, always kept in lowest terms.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number. Serializes as the string `"p/q"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse {
                input: format!("{num}/{den}"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Rational::from_bigint(p)
        } else {
            Rational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other) / Rational::integer(2)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Huge numerators/denominators: scale both down together.
            let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    /// `floor(x * 2^bits)` and `ceil(x * 2^bits)` as integers.
    pub fn scaled_floor_ceil(&self, bits: u32) -> (BigInt, BigInt) {
        let n = self.numer() << bits;
        let (q, r) = n.div_mod_floor(self.denom());
        let c = if r.is_zero() { q.clone() } else { &q + 1 };
        (q, c)
    }

    /// Decimal rendering rounded to nearest with 12 significant digits.
    pub fn to_decimal(&self) -> String {
        decimal_12(self)
    }

    pub(crate) fn inner(&self) -> &BigRational {
        &self.0
    }
}

fn decimal_12(x: &Rational) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // Find e with 10^e <= a < 10^(e+1).
    let ten = BigInt::from(10);
    let mut e: i64 = (a.numer().bits() as i64 - a.denom().bits() as i64) * 30103 / 100000;
    let pow10 = |k: i64| -> Rational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_bigint(p)
        } else {
            Rational(BigRational::new(BigInt::one(), p))
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    // Scale so 11 digits follow the leading one, then round half up.
    let scaled = &a * &pow10(11 - e);
    let mut digits = (scaled.inner() + BigRational::new(1.into(), 2.into()))
        .floor()
        .to_integer();
    if digits >= num_traits::pow(ten.clone(), 12) {
        digits /= &ten;
        e += 1;
    }
    let s = digits.to_string();
    let body = if (-5..12).contains(&e) {
        if e >= 0 {
            let (int, frac) = s.split_at((e + 1) as usize);
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{}", s.trim_end_matches('0'))
        }
    } else {
        let (lead, rest) = s.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{lead}e{e}")
        } else {
            format!("{lead}.{rest}e{e}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, a bare integer `p`, or a finite decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
            return Rational::from_bigints(n, d).map_err(|_| bad("zero denominator"));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let neg = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            let n: BigInt = digits.parse().map_err(|_| bad("bad decimal"))?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            let r = Rational(BigRational::new(n, d));
            return Ok(if neg { -r } else { r });
        }
        let n: BigInt = t.parse().map_err(|_| bad("expected p/q"))?;
        Ok(Rational::from_bigint(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}
