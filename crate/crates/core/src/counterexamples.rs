//! Constructors for the sequences that separate the two integration theories:
//! the canonical enumeration of `ℚ ∩ [0, 1]`, the fat covers `I_j`/`A_k`, and
//! the four sequence families.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Interval, IntervalSet, Rational};
use crate::functions::{KurtzTail, PiecewiseFunction, StepFunction};

/// Largest denominator for which enumeration indices are tabulated.
pub const MAX_INDEXED_DENOMINATOR: u64 = 1 << 22;

/// `cum[d]` = number of reduced fractions in `[0, 1]` with denominator `<= d`.
static CUMULATIVE: RwLock<Vec<u64>> = RwLock::new(Vec::new());

fn ensure_table(d: u64) {
    let d = d.min(MAX_INDEXED_DENOMINATOR) as usize;
    if CUMULATIVE.read().expect("table lock").len() > d {
        return;
    }
    let mut table = CUMULATIVE.write().expect("table lock");
    if table.len() > d {
        return;
    }
    let n = (d + 1).next_power_of_two().max(64).min(MAX_INDEXED_DENOMINATOR as usize + 1);
    let mut phi: Vec<u64> = (0..n as u64).collect();
    for p in 2..n {
        if phi[p] == p as u64 {
            for m in (p..n).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    let mut cum = vec![0u64; n];
    if n > 1 {
        cum[1] = 2;
    }
    for k in 2..n {
        cum[k] = cum[k - 1] + phi[k];
    }
    *table = cum;
}

fn cumulative(d: u64) -> u64 {
    ensure_table(d);
    CUMULATIVE.read().expect("table lock")[d as usize]
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `#{1 <= k <= m : gcd(k, d) = 1}` by inclusion–exclusion.
fn coprime_count(m: u64, d: u64) -> u64 {
    let primes = prime_factors(d);
    let mut total: i64 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let prod: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .product();
        let term = (m / prod) as i64;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u64
}

/// The `j`-th rational of `[0, 1]` (1-based): `0, 1`, then reduced fractions by
/// ascending denominator, ascending numerator.
pub fn enumerate_rationals(j: u64) -> Result<Rational> {
    match j {
        0 => return Err(Error::InvalidParameter("enumeration index starts at 1".into())),
        1 => return Ok(Rational::zero()),
        2 => return Ok(Rational::one()),
        _ => {}
    }
    // Smallest d with cum(d) >= j, found by doubling then bisection.
    let mut hi = 2u64;
    while cumulative(hi) < j {
        if hi >= MAX_INDEXED_DENOMINATOR {
            return Err(Error::InvalidParameter(format!(
                "enumeration index {j} exceeds the tabulated range"
            )));
        }
        hi = (hi * 2).min(MAX_INDEXED_DENOMINATOR);
    }
    let mut lo = 1u64;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if cumulative(mid) >= j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let d = hi;
    let mut rank = j - cumulative(d - 1);
    for p in 1..d {
        if p.gcd(&d) == 1 {
            rank -= 1;
            if rank == 0 {
                return Ok(Rational::new(p as i64, d as i64));
            }
        }
    }
    Err(Error::Invariant(format!("enumeration lost index {j}")))
}

/// Inverse of [`enumerate_rationals`]; `None` outside `[0, 1]` or beyond the
/// tabulated denominators.
pub fn rational_index(r: &Rational) -> Option<u64> {
    if r.is_negative() || *r > Rational::one() {
        return None;
    }
    if r.is_zero() {
        return Some(1);
    }
    if *r == Rational::one() {
        return Some(2);
    }
    let d = r.denom().to_u64()?;
    let p = r.numer().to_u64()?;
    if d > MAX_INDEXED_DENOMINATOR {
        return None;
    }
    Some(cumulative(d - 1) + coprime_count(p, d))
}

/// Total length parameter `ℓ ∈ (0, 1)` of the fat cover.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Rational", into = "Rational")]
pub struct FatCoverConfig {
    ell: Rational,
}

impl TryFrom<Rational> for FatCoverConfig {
    type Error = Error;
    fn try_from(ell: Rational) -> Result<Self> {
        FatCoverConfig::new(ell)
    }
}

impl From<FatCoverConfig> for Rational {
    fn from(c: FatCoverConfig) -> Self {
        c.ell
    }
}

impl Default for FatCoverConfig {
    fn default() -> Self {
        FatCoverConfig {
            ell: Rational::new(1, 2),
        }
    }
}

impl FatCoverConfig {
    pub fn new(ell: Rational) -> Result<Self> {
        if !ell.is_positive() || ell >= Rational::one() {
            return Err(Error::InvalidParameter(format!("ell = {ell} must lie in (0, 1)")));
        }
        Ok(FatCoverConfig { ell })
    }

    pub fn ell(&self) -> &Rational {
        &self.ell
    }

    /// `I_j = [0, 1] ∩ (q_j - ℓ/2^{j+1}, q_j + ℓ/2^{j+1})`; clipped ends are closed.
    pub fn interval(&self, j: u64) -> Result<Interval> {
        let centre = enumerate_rationals(j)?;
        let radius = &self.ell * Rational::pow2(-(j as i64 + 1));
        let lo = &centre - &radius;
        let hi = &centre + &radius;
        let (lo, lo_closed) = if lo.is_negative() {
            (Rational::zero(), true)
        } else {
            (lo, false)
        };
        let (hi, hi_closed) = if hi > Rational::one() {
            (Rational::one(), true)
        } else {
            (hi, false)
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// `A_k = I_1 ∪ ... ∪ I_k`.
    pub fn union(&self, k: u64) -> Result<IntervalSet> {
        let raw = (1..=k).map(|j| self.interval(j)).collect::<Result<Vec<_>>>()?;
        Ok(IntervalSet::normalize(raw))
    }

    /// `λ(I_{m+1}) + ... + λ(I_n)` for `m < n`, exactly.
    pub fn interval_lengths(&self, m: u64, n: u64) -> Result<Rational> {
        (m + 1..=n)
            .map(|j| self.interval(j).map(|i| i.length()))
            .sum::<Result<Rational>>()
    }

    /// `ℓ·2^{-k}`: bounds `Σ_{j>k} λ(I_j)`, hence `λ(A \ A_k)`.
    pub fn tail_bound(&self, k: u64) -> Rational {
        &self.ell * Rational::pow2(-(k as i64))
    }
}

pub fn fat_interval(cfg: &FatCoverConfig, j: u64) -> Result<Interval> {
    cfg.interval(j)
}

pub fn fat_union(cfg: &FatCoverConfig, k: u64) -> Result<IntervalSet> {
    cfg.union(k)
}

/// The four sequence families.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceKind {
    /// `F_k = χ_{q_1, ..., q_k}`.
    #[serde(rename = "F")]
    Frationals,
    /// `G_k = χ_{A_k}`.
    #[serde(rename = "G")]
    GfatCover { ell: FatCoverConfig },
    Typewriter,
    Kurtz,
}

impl SequenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceKind::Frationals => "F",
            SequenceKind::GfatCover { .. } => "G",
            SequenceKind::Typewriter => "typewriter",
            SequenceKind::Kurtz => "kurtz",
        }
    }

    /// Parses a CLI kind name; `G` takes the supplied fat-cover configuration.
    pub fn parse(name: &str, cfg: FatCoverConfig) -> Result<Self> {
        match name {
            "F" | "f" => Ok(SequenceKind::Frationals),
            "G" | "g" => Ok(SequenceKind::GfatCover { ell: cfg }),
            "typewriter" | "T" => Ok(SequenceKind::Typewriter),
            "kurtz" | "K" => Ok(SequenceKind::Kurtz),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected one of F, G, typewriter, kurtz".into(),
            }),
        }
    }

    pub fn term(&self, j: u64) -> Result<PiecewiseFunction> {
        sequence_term(self, j)
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceKind::GfatCover { ell } => write!(f, "G(ell={})", ell.ell()),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for SequenceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SequenceKind::parse(s, FatCoverConfig::default())
    }
}

/// `j = 2^n + i` with `0 <= i < 2^n`.
pub fn typewriter_block(j: u64) -> (u32, u64) {
    let n = 63 - j.leading_zeros();
    (n, j - (1u64 << n))
}

/// The closed dyadic block `[i·2^{-n}, (i+1)·2^{-n}]` carrying the `j`-th term.
pub fn typewriter_interval(j: u64) -> Result<Interval> {
    if j == 0 {
        return Err(Error::InvalidParameter("sequence index starts at 1".into()));
    }
    let (n, i) = typewriter_block(j);
    let den = BigInt::from(1u64) << n;
    Interval::closed(
        Rational::from_bigints(BigInt::from(i), den.clone())?,
        Rational::from_bigints(BigInt::from(i + 1), den)?,
    )
}

pub fn sequence_term(kind: &SequenceKind, j: u64) -> Result<PiecewiseFunction> {
    if j == 0 {
        return Err(Error::InvalidParameter("sequence index starts at 1".into()));
    }
    Ok(match kind {
        SequenceKind::Frationals => {
            let pts = (1..=j).map(enumerate_rationals).collect::<Result<Vec<_>>>()?;
            StepFunction::point_indicator(pts)?.into()
        }
        SequenceKind::GfatCover { ell } => StepFunction::indicator(&ell.union(j)?).into(),
        SequenceKind::Typewriter => {
            StepFunction::indicator(&IntervalSet::from_interval(typewriter_interval(j)?)).into()
        }
        SequenceKind::Kurtz => KurtzTail::new(j)?.into(),
    })
}
