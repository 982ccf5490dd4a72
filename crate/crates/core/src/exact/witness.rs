//! Canonical witness points: the simplest rational in an interval (Stern–Brocot
//! descent) and a midpoint-anchored quadratic irrational.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Interval, QuadraticIrrational, Rational};
use crate::error::{Error, Result};

/// Total order by simplicity: smaller denominator first, then smaller numerator.
pub fn simplicity_cmp(a: &Rational, b: &Rational) -> Ordering {
    a.denom()
        .cmp(b.denom())
        .then_with(|| a.numer().cmp(b.numer()))
}

/// The rational of least denominator inside `j` (endpoint flags respected).
pub fn simplest_rational_in(j: &Interval) -> Result<Rational> {
    if j.is_degenerate() {
        return if j.lo_closed() && j.hi_closed() {
            Ok(j.lo().clone())
        } else {
            Err(Error::DegenerateInterval(j.to_string()))
        };
    }
    Ok(simplest_between(
        j.lo(),
        j.lo_closed(),
        Some(j.hi()),
        j.hi_closed(),
    ))
}

/// Like [`simplest_rational_in`], skipping every point of `excluded`.
///
/// Each time the simplest candidate is excluded the interval splits at it; the
/// excluded points are spread over disjoint pieces, so at most
/// `2·|excluded| + 1` subproblems are visited.
pub fn simplest_rational_avoiding(
    j: &Interval,
    excluded: &BTreeSet<Rational>,
) -> Result<Rational> {
    if j.is_degenerate() {
        return Err(Error::DegenerateInterval(j.to_string()));
    }
    avoid(j.lo(), j.lo_closed(), j.hi(), j.hi_closed(), excluded)
        .ok_or_else(|| Error::Invariant(format!("no admissible rational found in {j}")))
}

fn avoid(
    lo: &Rational,
    lo_closed: bool,
    hi: &Rational,
    hi_closed: bool,
    excluded: &BTreeSet<Rational>,
) -> Option<Rational> {
    if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
        return None;
    }
    let r = if lo == hi {
        lo.clone()
    } else {
        simplest_between(lo, lo_closed, Some(hi), hi_closed)
    };
    if !excluded.contains(&r) {
        return Some(r);
    }
    let left = avoid(lo, lo_closed, &r, false, excluded);
    let right = avoid(&r, false, hi, hi_closed, excluded);
    match (left, right) {
        (Some(a), Some(b)) => Some(if simplicity_cmp(&a, &b) == Ordering::Greater {
            b
        } else {
            a
        }),
        (a, b) => a.or(b),
    }
}

/// Continued-fraction descent on a nonempty interval with `lo >= 0`; `hi = None`
/// means unbounded above.
fn simplest_between(
    lo: &Rational,
    lo_closed: bool,
    hi: Option<&Rational>,
    hi_closed: bool,
) -> Rational {
    let fl = Rational::from_bigint(lo.floor());
    let n = if lo.is_integer() && lo_closed {
        lo.clone()
    } else {
        &fl + Rational::one()
    };
    let fits = match hi {
        None => true,
        Some(h) => n < *h || (n == *h && hi_closed),
    };
    if fits {
        return n;
    }
    let hi = hi.expect("bounded here");
    // No integer inside, so the interval sits in [fl, fl + 1]; invert the
    // fractional part.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inv_hi = if lo_frac.is_zero() {
        None
    } else {
        Some(lo_frac.recip())
    };
    let y = simplest_between(&hi_frac.recip(), hi_closed, inv_hi.as_ref(), lo_closed);
    fl + y.recip()
}

/// An irrational `mid + (width/4)·√2` strictly inside `j`.
pub fn irrational_in(j: &Interval) -> Result<QuadraticIrrational> {
    if j.is_degenerate() {
        return Err(Error::DegenerateInterval(j.to_string()));
    }
    let x = QuadraticIrrational::new(j.midpoint(), j.length() / Rational::integer(4))?;
    if !j.contains_irrational(&x) {
        return Err(Error::Invariant(format!("{x} escaped {j}")));
    }
    Ok(x)
}
