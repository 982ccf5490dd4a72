//! Closed-form Fourier transforms of indicators of finite interval unions,
//! with certified enclosures.
//!
//! For `A = ⋃ [a_k, b_k] ⊆ [0, 1]`,
//! `F(ξ) = ∫_A e^{2πiξx} dx = Σ_e w_e e^{2πiξe} / (2πiξ)` where the endpoints
//! `e` carry weights `+1` (right ends) and `-1` (left ends).

mod fixed;
mod quadrature;

use serde::{Deserialize, Serialize};

use crate::counterexamples::FatCoverConfig;
use crate::error::{Error, Result};
use crate::exact::{sqrt_enclosure, Enclosure, Interval, IntervalSet, Rational};

use fixed::{pi, sin_cos_turn, Fx};

pub use quadrature::{
    improper_l2_profile, plancherel_probe, riemann_defect_summary, DefectSummary, L2Entry,
    L2ProfileReport, PlancherelReport,
};

/// A complex number known to lie in the box `re × im`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexEnclosure {
    pub re: Enclosure,
    pub im: Enclosure,
}

impl ComplexEnclosure {
    pub fn conj(&self) -> ComplexEnclosure {
        ComplexEnclosure {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Enclosure of `|z|²`.
    pub fn norm_sq(&self) -> Enclosure {
        let sq = |e: &Enclosure| {
            let a = e.abs();
            &a * &a
        };
        sq(&self.re) + sq(&self.im)
    }

    /// Enclosure of `|z|`, widened by at most `2^-bits` per end.
    pub fn modulus(&self, bits: u32) -> Enclosure {
        let n = self.norm_sq();
        let lo = sqrt_enclosure(n.lo(), bits).expect("nonnegative");
        let hi = sqrt_enclosure(n.hi(), bits).expect("nonnegative");
        Enclosure::new(lo.lo().clone(), hi.hi().clone()).expect("ordered")
    }

    pub fn widen(&self, r: &Rational) -> ComplexEnclosure {
        ComplexEnclosure {
            re: self.re.widen(r),
            im: self.im.widen(r),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `∫ f(x) e^{-2πiξx} dx`
    Forward,
    /// `∫ G(x) e^{+2πiξx} dx`
    #[default]
    Inverse,
}

/// The set whose indicator is transformed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum TransformSource {
    /// `A_k` of the fat cover.
    FatCover { ell: FatCoverConfig, k: u64 },
    /// Any finite union of intervals, e.g. the control case `(0, 1)`.
    Set { set: IntervalSet },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TransformProbe {
    #[serde(flatten)]
    pub source: TransformSource,
    #[serde(default)]
    pub direction: Direction,
    /// Widen by `|F - F_k| <= ℓ·2^{-k}` to target the untruncated transform.
    #[serde(default)]
    pub untruncated: bool,
}

impl TransformProbe {
    pub fn fat_cover(ell: FatCoverConfig, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("truncation depth k must be >= 1".into()));
        }
        Ok(TransformProbe {
            source: TransformSource::FatCover { ell, k },
            direction: Direction::Inverse,
            untruncated: false,
        })
    }

    pub fn set(set: IntervalSet) -> Self {
        TransformProbe {
            source: TransformSource::Set { set },
            direction: Direction::Inverse,
            untruncated: false,
        }
    }

    /// The control case `(0, 1)`.
    pub fn unit_interval() -> Self {
        TransformProbe::set(IntervalSet::from_interval(
            Interval::open(Rational::zero(), Rational::one()).expect("valid interval"),
        ))
    }

    pub fn with_direction(mut self, d: Direction) -> Self {
        self.direction = d;
        self
    }

    pub fn with_untruncated(mut self, yes: bool) -> Self {
        self.untruncated = yes;
        self
    }

    pub fn indicator_set(&self) -> Result<IntervalSet> {
        match &self.source {
            TransformSource::FatCover { ell, k } => {
                if *k == 0 {
                    return Err(Error::InvalidParameter("truncation depth k must be >= 1".into()));
                }
                ell.union(*k)
            }
            TransformSource::Set { set } => Ok(set.clone()),
        }
    }

    /// `ℓ·2^{-k}` for fat-cover sources.
    pub fn truncation_slack(&self) -> Option<Rational> {
        match &self.source {
            TransformSource::FatCover { ell, k } => Some(ell.tail_bound(*k)),
            TransformSource::Set { .. } => None,
        }
    }
}

/// Signed endpoints with coincident ones merged and zero weights dropped.
pub(crate) fn weighted_endpoints(set: &IntervalSet) -> Vec<(Rational, i64)> {
    let mut map = std::collections::BTreeMap::new();
    for c in set.components() {
        *map.entry(c.hi().clone()).or_insert(0i64) += 1;
        *map.entry(c.lo().clone()).or_insert(0i64) -= 1;
    }
    map.into_iter().filter(|(_, w)| *w != 0).collect()
}

/// `Σ|w_e| / 2`; equals the number of components when no two touch.
pub(crate) fn effective_components(ends: &[(Rational, i64)]) -> i64 {
    ends.iter().map(|(_, w)| w.abs()).sum::<i64>() / 2
}

fn bit_length(r: &Rational) -> u32 {
    // ⌈log₂ r⌉ for r >= 1, 0 otherwise; only used to size working precision.
    let c = r.ceil();
    if c <= num_bigint::BigInt::from(1) {
        0
    } else {
        c.bits() as u32
    }
}

/// `(Σ w sin(ωe), Σ w cos(ωe))` with `ω = 2π|ξ|`, scaled by `2^w`.
fn endpoint_sums(ends: &[(Rational, i64)], xi: &Rational, w: u32) -> (Fx, Fx) {
    let mut s = Fx::zero();
    let mut c = Fx::zero();
    for (e, wt) in ends {
        let (si, co) = sin_cos_turn(&(xi * e), w);
        let k = Rational::integer(*wt);
        s = s.add(&si.mul_rational(&k));
        c = c.add(&co.mul_rational(&k));
    }
    (s, c)
}

/// Certified value of the transform of `χ_{A}` at `freq`, each component of
/// width at most `2^-prec` before any truncation widening.
pub fn transform_value(p: &TransformProbe, freq: &Rational, prec: u32) -> Result<ComplexEnclosure> {
    if prec < 16 {
        return Err(Error::InvalidParameter("precision must be >= 16 bits".into()));
    }
    let set = p.indicator_set()?;
    let value = if freq.is_zero() {
        ComplexEnclosure {
            re: Enclosure::exact(set.measure()),
            im: Enclosure::exact(Rational::zero()),
        }
    } else {
        transform_nonzero(&set, p.direction, freq, prec)?
    };
    Ok(match (p.untruncated, p.truncation_slack()) {
        (true, Some(slack)) => value.widen(&slack),
        _ => value,
    })
}

fn transform_nonzero(set: &IntervalSet, dir: Direction, freq: &Rational, prec: u32) -> Result<ComplexEnclosure> {
    let ends = weighted_endpoints(set);
    let xi = freq.abs();
    // Kernel e^{2πisx} with s = σ|ξ|: the real part does not depend on σ and
    // the imaginary part flips with it, so conjugate symmetry is exact.
    let sigma = match dir {
        Direction::Inverse => freq.is_positive(),
        Direction::Forward => freq.is_negative(),
    };
    let mut extra = 24 + bit_length(&xi.recip()) + 8;
    for _ in 0..8 {
        let w = prec + extra;
        let (s, c) = endpoint_sums(&ends, &xi, w);
        let pi_w = pi(w);
        let omega = pi_w.mul_rational(&(&xi * &Rational::integer(2)));
        let inv = omega.recip_positive(w);
        // Re = Σ w sin(ωe)/ω, Im = -σ Σ w cos(ωe)/ω
        let re = s.mul(&inv, w);
        let mut im = c.mul(&inv, w).neg();
        if !sigma {
            im = im.neg();
        }
        let re_e = re.to_enclosure(w);
        let im_e = im.to_enclosure(w);
        let limit = Rational::pow2(-(prec as i64));
        if re_e.width() <= limit && im_e.width() <= limit {
            return Ok(ComplexEnclosure { re: re_e, im: im_e });
        }
        extra += 32;
    }
    Err(Error::Invariant(format!(
        "transform at {freq} did not reach 2^-{prec} width"
    )))
}

/// `c/(π|ξ|)` with `c` the number of components: `|F_k(ξ)| <= Σ|w_e|/(2π|ξ|)`.
pub fn decay_bound(p: &TransformProbe, freq: &Rational) -> Result<Rational> {
    if freq.is_zero() {
        return Err(Error::ZeroFrequency);
    }
    let set = p.indicator_set()?;
    let c = effective_components(&weighted_endpoints(&set));
    let (pi_lo, _) = fixed::pi_bounds(64);
    Ok(Rational::integer(c) / (pi_lo * freq.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn zero_frequency_is_the_measure() {
        let v = transform_value(&TransformProbe::unit_interval(), &Rational::zero(), 32).unwrap();
        assert_eq!(v.re, Enclosure::exact(Rational::one()));
        assert_eq!(v.im, Enclosure::exact(Rational::zero()));
        let p = TransformProbe::fat_cover(FatCoverConfig::default(), 3).unwrap();
        let v = transform_value(&p, &Rational::zero(), 32).unwrap();
        assert_eq!(v.re, Enclosure::exact(q(1, 4)));
    }

    #[test]
    fn half_frequency_on_unit_interval() {
        // ∫₀¹ e^{πit} dt = 2i/π
        let v = transform_value(&TransformProbe::unit_interval(), &q(1, 2), 40).unwrap();
        let two_over_pi = q(6366197723675814, 10000000000000000);
        let m = v.modulus(48);
        assert!(m.widen(&Rational::pow2(-40)).contains(&two_over_pi));
        assert!(v.re.contains(&Rational::zero()));
        assert!(v.re.width() <= Rational::pow2(-40));
    }

    #[test]
    fn matches_numerical_quadrature() {
        // Oracle: composite Simpson in f64 on each component.
        let p = TransformProbe::fat_cover(FatCoverConfig::default(), 4).unwrap();
        let set = p.indicator_set().unwrap();
        for xi in [q(1, 3), q(-5, 2), q(7, 1), q(1, 1000)] {
            let v = transform_value(&p, &xi, 30).unwrap();
            let (mut re, mut im) = (0.0, 0.0);
            for c in set.components() {
                let (a, b) = (c.lo().to_f64(), c.hi().to_f64());
                let n = 2000;
                let h = (b - a) / n as f64;
                for i in 0..=n {
                    let x = a + i as f64 * h;
                    let wgt = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    let ang = 2.0 * std::f64::consts::PI * xi.to_f64() * x;
                    re += wgt * ang.cos() * h / 3.0;
                    im += wgt * ang.sin() * h / 3.0;
                }
            }
            assert!((v.re.midpoint().to_f64() - re).abs() < 1e-9, "{xi}");
            assert!((v.im.midpoint().to_f64() - im).abs() < 1e-9, "{xi}");
        }
    }

    #[test]
    fn conjugate_symmetry_and_direction() {
        let p = TransformProbe::fat_cover(FatCoverConfig::default(), 5).unwrap();
        for num in 1..=10 {
            let xi = q(num * 3, 7);
            let a = transform_value(&p, &xi, 32).unwrap();
            let b = transform_value(&p, &-xi.clone(), 32).unwrap();
            assert_eq!(a.conj(), b);
            let fwd = transform_value(&p.clone().with_direction(Direction::Forward), &xi, 32).unwrap();
            assert_eq!(fwd, b);
        }
    }

    #[test]
    fn decay_bounds() {
        let unit = TransformProbe::unit_interval();
        let b = decay_bound(&unit, &q(10, 1)).unwrap();
        let v = transform_value(&unit, &q(10, 1), 40).unwrap();
        assert!(v.modulus(48).hi() <= &b);
        // 1/(10π) < b, barely.
        assert!((b.to_f64() - 1.0 / (10.0 * std::f64::consts::PI)).abs() < 1e-15);
        let p = TransformProbe::fat_cover(FatCoverConfig::default(), 3).unwrap();
        let b100 = decay_bound(&p, &q(100, 1)).unwrap();
        assert!((b100.to_f64() - 3.0 / (100.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(decay_bound(&p, &q(200, 1)).unwrap() * Rational::integer(2), b100);
        assert_eq!(decay_bound(&p, &Rational::zero()), Err(Error::ZeroFrequency));
    }

    #[test]
    fn modulus_bounded_by_measure() {
        let p = TransformProbe::fat_cover(FatCoverConfig::default(), 6).unwrap();
        let m = p.indicator_set().unwrap().measure();
        for num in 1..20 {
            let v = transform_value(&p, &q(num, 3), 32).unwrap();
            assert!(v.modulus(40).lo() <= &m);
        }
    }

    #[test]
    fn untruncated_widening() {
        let p = TransformProbe::fat_cover(FatCoverConfig::default(), 3)
            .unwrap()
            .with_untruncated(true);
        let v = transform_value(&p, &Rational::zero(), 32).unwrap();
        assert_eq!(v.re.width(), q(1, 8));
    }
}
