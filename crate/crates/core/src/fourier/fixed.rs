//! Fixed-point interval arithmetic on `BigInt`s scaled by `2^w`, with
//! certified π and sine/cosine of rational multiples of a full turn.
//!
//! Every operation rounds its lower end down and its upper end up, so an
//! interval always contains the real value it tracks.

use std::sync::RwLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{Enclosure, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Fx {
    pub lo: BigInt,
    pub hi: BigInt,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_floor(a: &BigInt, s: u32) -> BigInt {
    a >> s
}

fn shr_ceil(a: &BigInt, s: u32) -> BigInt {
    -((-a) >> s)
}

impl Fx {
    pub fn exact(v: BigInt) -> Fx {
        Fx { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Fx {
        Fx::exact(BigInt::zero())
    }

    pub fn one(w: u32) -> Fx {
        Fx::exact(BigInt::one() << w)
    }

    #[cfg(test)]
    pub fn from_rational(r: &Rational, w: u32) -> Fx {
        let (lo, hi) = r.scaled_floor_ceil(w);
        Fx { lo, hi }
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Fx {
        Fx {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Fx, w: u32) -> Fx {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let min = p.iter().min().expect("four products");
        let max = p.iter().max().expect("four products");
        Fx {
            lo: shr_floor(min, w),
            hi: shr_ceil(max, w),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Fx {
        let (n, d) = (r.numer(), r.denom());
        let a = &self.lo * n;
        let b = &self.hi * n;
        let (min, max) = if a <= b { (a, b) } else { (b, a) };
        Fx {
            lo: min.div_floor(d),
            hi: ceil_div(&max, d),
        }
    }

    pub fn square(&self, w: u32) -> Fx {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.lo.sign() != Sign::Minus {
            Fx { lo: shr_floor(&a, w), hi: shr_ceil(&b, w) }
        } else if self.hi.sign() != Sign::Plus {
            Fx { lo: shr_floor(&b, w), hi: shr_ceil(&a, w) }
        } else {
            Fx {
                lo: BigInt::zero(),
                hi: shr_ceil(if a > b { &a } else { &b }, w),
            }
        }
    }

    /// `1/x` for `x > 0`.
    pub fn recip_positive(&self, w: u32) -> Fx {
        assert!(self.lo.is_positive(), "reciprocal of a non-positive interval");
        let one = BigInt::one() << (2 * w);
        Fx {
            lo: one.div_floor(&self.hi),
            hi: ceil_div(&one, &self.lo),
        }
    }

    /// Upper bound on `√hi` (the interval is assumed nonnegative).
    pub fn sqrt_hi(&self, w: u32) -> BigInt {
        if !self.hi.is_positive() {
            return BigInt::zero();
        }
        let s = &self.hi << w;
        let r = s.sqrt();
        if &r * &r == s {
            r
        } else {
            r + 1
        }
    }

    /// Rescales from `w` to a coarser `to <= w`.
    pub fn coarsen(&self, w: u32, to: u32) -> Fx {
        Fx {
            lo: shr_floor(&self.lo, w - to),
            hi: shr_ceil(&self.hi, w - to),
        }
    }

    #[cfg(test)]
    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn to_enclosure(&self, w: u32) -> Enclosure {
        let den = BigInt::one() << w;
        let lo = Rational::from_bigints(self.lo.clone(), den.clone()).expect("nonzero scale");
        let hi = Rational::from_bigints(self.hi.clone(), den).expect("nonzero scale");
        Enclosure::new(lo, hi).expect("ordered fixed-point bounds")
    }
}

/// Lower bound on `arctan(1/x)·2^w` and the error in ulps.
fn arctan_inv(x: u32, w: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut p = (BigInt::one() << w).div_floor(&BigInt::from(x));
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !p.is_zero() {
        let term = p.div_floor(&BigInt::from(2 * n + 1));
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        p = p.div_floor(&x2);
        n += 1;
    }
    // Each p carries < 2 ulps of floor error, each term < 3; the omitted
    // tail of the alternating series is below one ulp.
    (sum, BigInt::from(3 * n + 3))
}

/// Scale at which π is cached; requests beyond it recompute.
const PI_CACHE_BITS: u32 = 2048;

static PI_CACHE: RwLock<Option<(u32, Fx)>> = RwLock::new(None);

fn compute_pi(w: u32) -> Fx {
    let guard = 16;
    let (a, ea) = arctan_inv(5, w + guard);
    let (b, eb) = arctan_inv(239, w + guard);
    let (c16, c4) = (BigInt::from(16), BigInt::from(4));
    let mid = a * &c16 - b * &c4;
    let err = ea * &c16 + eb * &c4;
    Fx {
        lo: mid.clone() - &err,
        hi: mid + err,
    }
    .coarsen(w + guard, w)
}

/// Machin's formula `π = 16·arctan(1/5) - 4·arctan(1/239)`.
pub(crate) fn pi(w: u32) -> Fx {
    if let Some((cw, p)) = PI_CACHE.read().expect("pi cache poisoned").as_ref() {
        if *cw >= w {
            return p.coarsen(*cw, w);
        }
    }
    let cw = w.max(PI_CACHE_BITS);
    let p = compute_pi(cw);
    let out = p.coarsen(cw, w);
    *PI_CACHE.write().expect("pi cache poisoned") = Some((cw, p));
    out
}

/// Rational lower and upper bounds on π with width `2^-bits`.
pub(crate) fn pi_bounds(bits: u32) -> (Rational, Rational) {
    let e = pi(bits).to_enclosure(bits);
    (e.lo().clone(), e.hi().clone())
}

/// Bounds on `sin x` and `cos x` for `0 <= x < 1`, all scaled by `2^w`.
fn sin_cos_point(x: &BigInt, w: u32) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let guard = 48;
    let ww = w + guard;
    let x = x << guard;
    let xx = (&x * &x) >> ww;
    let series = |first: BigInt, offset: u64| -> (BigInt, BigInt) {
        let mut t: BigInt = first;
        let mut sum = t.clone();
        let mut n: u64 = 0;
        while !t.is_zero() {
            n += 1;
            let k = (2 * n - 1 + offset) * (2 * n + offset);
            t = ((&t * &xx) >> ww).div_floor(&BigInt::from(k));
            if n % 2 == 1 {
                sum -= &t;
            } else {
                sum += &t;
            }
        }
        // Each term carries at most 2n ulps of floor error; the dropped tail
        // is below the last computed term's error.
        let err = BigInt::from(n * n + 3 * n + 2);
        (shr_floor(&(&sum - &err), guard), shr_ceil(&(&sum + &err), guard))
    };
    let sin = series(x.clone(), 1);
    let cos = series(BigInt::one() << ww, 0);
    (sin, cos)
}

/// Enclosures of `(sin 2πr, cos 2πr)` scaled by `2^w`.
///
/// `r` is reduced exactly modulo 1 and to an octant, so the series only ever
/// sees angles in `[0, π/4]`.
pub(crate) fn sin_cos_turn(r: &Rational, w: u32) -> (Fx, Fx) {
    let frac = r - &Rational::from_bigint(r.floor());
    let u = &frac * &Rational::integer(8);
    let octant: i64 = num_traits::ToPrimitive::to_i64(&u.floor()).expect("octant in 0..8");
    let g = &u - &Rational::integer(octant);
    // angle = quarter·π/2 + sign·(π/4)·t
    let (quarter, sign, t) = if octant % 2 == 0 {
        (octant / 2, 1, g)
    } else {
        ((octant + 1) / 2, -1, Rational::one() - g)
    };
    let (s, c) = if t.is_zero() {
        (Fx::zero(), Fx::one(w))
    } else {
        let theta = pi(w).mul_rational(&(&t / &Rational::integer(4)));
        let ((slo, _), (_, chi)) = sin_cos_point(&theta.lo, w);
        let ((_, shi), (clo, _)) = sin_cos_point(&theta.hi, w);
        let one = BigInt::one() << w;
        let s = Fx { lo: slo.max(BigInt::zero()), hi: shi.min(one.clone()) };
        let c = Fx { lo: clo.max(BigInt::zero()), hi: chi.min(one) };
        (s, c)
    };
    let s = if sign < 0 { s.neg() } else { s };
    match quarter.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}
