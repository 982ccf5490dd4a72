//! Certified convergence-mode checks for the four sequence families:
//! L¹ Cauchy moduli, L¹ limit defects, pointwise stabilization versus
//! oscillation, convergence in measure, and domination.

use serde::{Deserialize, Serialize};

use crate::counterexamples::{
    enumerate_rationals, rational_index, typewriter_block, typewriter_interval, FatCoverConfig,
    SequenceKind,
};
use crate::error::{Error, Result};
use crate::exact::{
    inv_sqrt_enclosure, Enclosure, Interval, IntervalSet, QuadraticIrrational, Rational,
};
use crate::functions::{check_domain, PiecewiseFunction, StepFunction, Value, TAIL_BITS};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PointwiseStabilized,
    Oscillating,
    InMeasureToZero,
    CauchyL1,
    L1Converged,
    /// Partial integrals nondecreasing and bounded (improper Riemann criterion).
    MonotoneBounded,
    /// No verdict could be certified within the horizon.
    Undetermined,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub j: u64,
    pub value: Value,
}

/// One dyadic block of the typewriter sequence: an index where the probe is
/// covered and (for `n >= 2`) one where it is not.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockWitness {
    pub n: u32,
    pub one_at: u64,
    pub zero_at: Option<u64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Stabilized { index: u64, value: Value, reason: String },
    Oscillating { complete_blocks: u32, blocks: Vec<BlockWitness> },
    None { reason: String },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub kind: String,
    pub mode: Mode,
    pub certified: bool,
    pub witness: Witness,
    pub trace: Vec<TraceEntry>,
    pub note: Option<String>,
}

fn check_order(j: u64, m: u64) -> Result<()> {
    if j == 0 || j >= m {
        return Err(Error::Ordering { lo: j, hi: m });
    }
    Ok(())
}

fn value_of(e: Enclosure) -> Value {
    if e.is_exact() {
        Value::Exact(e.lo().clone())
    } else {
        Value::Enclosed(e)
    }
}

fn inv_sqrt(j: u64) -> Enclosure {
    inv_sqrt_enclosure(&Rational::integer(j as i64), TAIL_BITS).expect("j >= 1")
}

/// `2^{-⌊log₂ j⌋}`, the length of the `j`-th typewriter block.
fn typewriter_length(j: u64) -> Rational {
    let (n, _) = typewriter_block(j);
    Rational::pow2(-(n as i64))
}

/// What is known about the L¹ limit of each family.
pub fn limit_note(kind: &SequenceKind) -> &'static str {
    match kind {
        SequenceKind::Frationals => {
            "L1 limit is the zero class; the pointwise limit (indicator of the rationals) is not Riemann integrable"
        }
        SequenceKind::GfatCover { .. } => {
            "L1 limit is the indicator of the fat cover, whose boundary has measure >= 1 - ell: no representative of the limit class is Riemann integrable"
        }
        SequenceKind::Typewriter => {
            "converges to 0 in L1 and in measure, but oscillates at every point"
        }
        SequenceKind::Kurtz => {
            "L1 limit x^(-1/2) is improperly Riemann integrable on (0, 1]: this Cauchy sequence converges within the improper Riemann class"
        }
    }
}

/// `‖f_j - f_m‖₁` for `1 <= j < m`.
pub fn pairwise_l1_distance(kind: &SequenceKind, j: u64, m: u64) -> Result<Value> {
    check_order(j, m)?;
    Ok(match kind {
        SequenceKind::Frationals => Value::Exact(Rational::zero()),
        SequenceKind::GfatCover { ell } => Value::Exact(ell.union(m)?.diff(&ell.union(j)?).measure()),
        SequenceKind::Typewriter => {
            let a = IntervalSet::from_interval(typewriter_interval(j)?);
            let b = IntervalSet::from_interval(typewriter_interval(m)?);
            Value::Exact(a.diff(&b).measure() + b.diff(&a).measure())
        }
        SequenceKind::Kurtz => {
            // ∫_{1/m}^{1/j} x^{-1/2} dx
            value_of((inv_sqrt(j) - inv_sqrt(m)).scale(&Rational::integer(2)))
        }
    })
}

/// `N` with `‖f_k - f_m‖₁ < eps` for all `m > k >= N`, and why.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CauchyCertificate {
    pub kind: String,
    pub eps: Rational,
    pub n: u64,
    /// Every distance with `m > k >= n` is strictly below this.
    pub bound: Rational,
    pub reason: String,
}

pub fn cauchy_modulus(kind: &SequenceKind, eps: &Rational) -> Result<CauchyCertificate> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let (n, bound, reason) = match kind {
        SequenceKind::Frationals => (
            1,
            Rational::zero(),
            "every term vanishes almost everywhere, so all distances are 0".to_string(),
        ),
        SequenceKind::GfatCover { ell } => {
            let mut k = 1u64;
            while ell.tail_bound(k) > *eps {
                k += 1;
            }
            (
                k,
                ell.tail_bound(k),
                format!(
                    "dist(G_k, G_m) = λ(A_m \\ A_k) <= Σ_{{k<j<=m}} λ(I_j) < ell·2^-k = {} <= eps",
                    ell.tail_bound(k)
                ),
            )
        }
        SequenceKind::Kurtz => {
            // 2(k^{-1/2} - m^{-1/2}) < 2·N^{-1/2} <= eps  ⟺  N >= 4/eps²
            let ceil = (Rational::integer(4) / eps.square()).ceil();
            let n: u64 = num_traits::ToPrimitive::to_u64(&ceil)
                .ok_or_else(|| Error::InvalidParameter(format!("eps = {eps} is too small")))?
                .max(1);
            let bound = inv_sqrt(n).scale(&Rational::integer(2));
            if bound.lo() > eps {
                return Err(Error::Invariant(format!("modulus {n} fails its own check")));
            }
            (
                n,
                bound.hi().clone().min(eps.clone()),
                format!("dist(f_k, f_m) = 2(k^-1/2 - m^-1/2) < 2·{n}^-1/2 <= eps"),
            )
        }
        SequenceKind::Typewriter => {
            return Err(Error::UnsupportedKind {
                kind: "typewriter",
                op: "cauchy_modulus",
            })
        }
    };
    Ok(CauchyCertificate {
        kind: kind.to_string(),
        eps: eps.clone(),
        n,
        bound,
        reason,
    })
}

/// Enclosure of `‖f - f_k‖₁` where `f` is the L¹ limit of the family.
pub fn l1_limit_defect(kind: &SequenceKind, k: u64, probe_m: u64) -> Result<Enclosure> {
    check_order(k, probe_m)?;
    Ok(match kind {
        SequenceKind::Frationals => Enclosure::exact(Rational::zero()),
        SequenceKind::GfatCover { ell } => {
            let lo = ell.union(probe_m)?.diff(&ell.union(k)?).measure();
            let hi = &lo + &ell.tail_bound(probe_m);
            Enclosure::new(lo, hi)?
        }
        SequenceKind::Typewriter => Enclosure::exact(typewriter_length(k)),
        // ∫_0^{1/k} x^{-1/2} dx against the limit x^{-1/2}
        SequenceKind::Kurtz => inv_sqrt(k).scale(&Rational::integer(2)),
    })
}

pub fn pointwise_profile(kind: &SequenceKind, x: &Rational, jmax: u64) -> Result<ConvergenceVerdict> {
    check_domain(x)?;
    if jmax < 4 {
        return Err(Error::InvalidParameter("jmax must be >= 4".into()));
    }
    match kind {
        SequenceKind::Frationals => frationals_profile(kind, x, jmax),
        SequenceKind::GfatCover { ell } => fat_cover_profile(kind, ell, x, jmax),
        SequenceKind::Typewriter => typewriter_profile(kind, x, jmax),
        SequenceKind::Kurtz => kurtz_profile(kind, x, jmax),
    }
}

fn indicator_trace(jmax: u64, mut member: impl FnMut(u64) -> Result<bool>) -> Result<Vec<TraceEntry>> {
    (1..=jmax)
        .map(|j| {
            let v = if member(j)? { Rational::one() } else { Rational::zero() };
            Ok(TraceEntry { j, value: Value::Exact(v) })
        })
        .collect()
}

fn frationals_profile(kind: &SequenceKind, x: &Rational, jmax: u64) -> Result<ConvergenceVerdict> {
    let idx = rational_index(x);
    let trace = indicator_trace(jmax, |j| Ok(idx.is_some_and(|m| j >= m)))?;
    let (mode, certified, witness) = match idx {
        Some(m) => (
            Mode::PointwiseStabilized,
            true,
            Witness::Stabilized {
                index: m,
                value: Value::Exact(Rational::one()),
                reason: format!("x = q_{m}, so F_j(x) = 1 exactly for j >= {m}"),
            },
        ),
        None => (
            Mode::Undetermined,
            false,
            Witness::None {
                reason: "denominator beyond the indexed range".into(),
            },
        ),
    };
    Ok(ConvergenceVerdict {
        kind: kind.to_string(),
        mode,
        certified,
        witness,
        trace,
        note: None,
    })
}

fn fat_cover_profile(
    kind: &SequenceKind,
    cfg: &FatCoverConfig,
    x: &Rational,
    jmax: u64,
) -> Result<ConvergenceVerdict> {
    // G_j(x) is nondecreasing in j, so the first hit is the stabilization index.
    let idx = rational_index(x);
    let horizon = idx.map_or(jmax, |m| m.max(jmax));
    let mut first = None;
    for j in 1..=horizon {
        if cfg.interval(j)?.contains(x) {
            first = Some(j);
            break;
        }
    }
    let trace = indicator_trace(jmax, |j| Ok(first.is_some_and(|f| j >= f)))?;
    let (mode, certified, witness) = match first {
        Some(f) => (
            Mode::PointwiseStabilized,
            true,
            Witness::Stabilized {
                index: f,
                value: Value::Exact(Rational::one()),
                reason: format!("x ∈ I_{f} ⊆ A_j for all j >= {f}"),
            },
        ),
        None => (
            Mode::Undetermined,
            false,
            Witness::None {
                reason: format!("x not covered by I_1, ..., I_{jmax}"),
            },
        ),
    };
    Ok(ConvergenceVerdict {
        kind: kind.to_string(),
        mode,
        certified,
        witness,
        trace,
        note: idx.map(|m| format!("x = q_{m}")),
    })
}

/// Pointwise profile of `G_j` at an irrational probe `p + q√2`.
pub fn fat_cover_profile_irrational(
    cfg: &FatCoverConfig,
    x: &QuadraticIrrational,
    jmax: u64,
) -> Result<ConvergenceVerdict> {
    if jmax < 4 {
        return Err(Error::InvalidParameter("jmax must be >= 4".into()));
    }
    if !Interval::unit().contains_irrational(x) {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    let mut first = None;
    for j in 1..=jmax {
        if cfg.interval(j)?.contains_irrational(x) {
            first = Some(j);
            break;
        }
    }
    let trace = indicator_trace(jmax, |j| Ok(first.is_some_and(|f| j >= f)))?;
    let kind = SequenceKind::GfatCover { ell: cfg.clone() };
    Ok(match first {
        Some(f) => ConvergenceVerdict {
            kind: kind.to_string(),
            mode: Mode::PointwiseStabilized,
            certified: true,
            witness: Witness::Stabilized {
                index: f,
                value: Value::Exact(Rational::one()),
                reason: format!("x ∈ I_{f} ⊆ A_j for all j >= {f}"),
            },
            trace,
            note: None,
        },
        None => ConvergenceVerdict {
            kind: kind.to_string(),
            mode: Mode::Undetermined,
            certified: false,
            witness: Witness::None {
                reason: format!("x not covered by I_1, ..., I_{jmax}; later intervals may still cover it"),
            },
            trace,
            note: None,
        },
    })
}

fn typewriter_profile(kind: &SequenceKind, x: &Rational, jmax: u64) -> Result<ConvergenceVerdict> {
    let trace = indicator_trace(jmax, |j| Ok(typewriter_interval(j)?.contains(x)))?;
    // Only blocks n with 2^{n+1} - 1 <= jmax are complete.
    let complete = 63 - (jmax + 1).leading_zeros();
    let mut blocks = Vec::new();
    let mut ok = true;
    for n in 0..complete {
        let start = 1u64 << n;
        let range = start..2 * start;
        let is_one = |j: &u64| trace[(*j - 1) as usize].value == Value::Exact(Rational::one());
        let one_at = range.clone().find(is_one);
        let zero_at = range.clone().find(|j| !is_one(j));
        match one_at {
            Some(one_at) => blocks.push(BlockWitness { n, one_at, zero_at }),
            None => ok = false,
        }
        if n >= 2 && zero_at.is_none() {
            ok = false;
        }
    }
    ok &= complete >= 3;
    Ok(ConvergenceVerdict {
        kind: kind.to_string(),
        mode: if ok { Mode::Oscillating } else { Mode::Undetermined },
        certified: ok,
        witness: Witness::Oscillating {
            complete_blocks: complete,
            blocks,
        },
        trace,
        note: Some(format!(
            "finite-horizon certificate: oscillation verified in every complete block up to j = {}",
            (1u64 << complete) - 1
        )),
    })
}

fn kurtz_profile(kind: &SequenceKind, x: &Rational, jmax: u64) -> Result<ConvergenceVerdict> {
    let mut trace = Vec::with_capacity(jmax as usize);
    for j in 1..=jmax {
        let f = kind.term(j)?;
        trace.push(TraceEntry {
            j,
            value: f.eval(&x.clone().into())?,
        });
    }
    // f_j(x) = x^{-1/2} once 1/j < x; f_j(0) = 0 for all j.
    let (index, value, reason) = if x.is_zero() {
        (1, Value::Exact(Rational::zero()), "f_j(0) = 0 for every j".to_string())
    } else {
        let index = num_traits::ToPrimitive::to_u64(&x.recip().floor()).unwrap_or(u64::MAX) + 1;
        let value = value_of(inv_sqrt_enclosure(x, TAIL_BITS)?);
        (index, value, format!("1/j < x for all j >= {index}"))
    };
    Ok(ConvergenceVerdict {
        kind: kind.to_string(),
        mode: Mode::PointwiseStabilized,
        certified: true,
        witness: Witness::Stabilized { index, value, reason },
        trace,
        note: None,
    })
}

/// `λ({x : |f(x)| >= eps})` for a step function; exceptions have measure zero.
pub fn superlevel_measure(f: &StepFunction, eps: &Rational) -> Rational {
    f.pieces()
        .iter()
        .filter(|p| p.value.abs() >= *eps)
        .map(|p| p.interval.length())
        .sum()
}

/// Exact `λ({x : |f_j(x)| >= eps})` for `j = 1..=jmax`.
pub fn in_measure_profile(kind: &SequenceKind, eps: &Rational, jmax: u64) -> Result<Vec<(u64, Rational)>> {
    if !eps.is_positive() || *eps > Rational::one() {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1]")));
    }
    let mut out = Vec::with_capacity(jmax as usize);
    match kind {
        SequenceKind::Frationals => out.extend((1..=jmax).map(|j| (j, Rational::zero()))),
        SequenceKind::GfatCover { ell } => {
            // Values are 0 or 1 and eps <= 1, so the superlevel set is A_j.
            let mut a = IntervalSet::empty();
            for j in 1..=jmax {
                a = a.union(&IntervalSet::from_interval(ell.interval(j)?));
                out.push((j, a.measure()));
            }
        }
        SequenceKind::Typewriter => out.extend((1..=jmax).map(|j| (j, typewriter_length(j)))),
        SequenceKind::Kurtz => {
            // {x > 1/j : x^{-1/2} >= eps} = (1/j, 1] since eps <= 1.
            out.extend((1..=jmax).map(|j| (j, Rational::one() - Rational::new(1, j as i64))));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominationMode {
    /// `|f| <= g` outside a null set.
    #[default]
    AlmostEverywhere,
    /// `|f(x)| <= g(x)` at every point.
    Everywhere,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DominationFailure {
    pub term: usize,
    /// An open cell of positive measure, or a single point in everywhere mode.
    pub cell: Interval,
    pub term_value: Rational,
    pub bound_value: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DominationVerdict {
    pub mode: DominationMode,
    pub dominated: bool,
    pub failure: Option<DominationFailure>,
}

pub fn dominated_check(
    terms: &[PiecewiseFunction],
    g: &PiecewiseFunction,
    mode: DominationMode,
) -> Result<DominationVerdict> {
    let g = g.as_step()?;
    if g.pieces().iter().any(|p| p.value.is_negative())
        || g.exceptions().iter().any(|e| e.value.is_negative())
    {
        return Err(Error::InvalidParameter("dominating function must be nonnegative".into()));
    }
    let steps = terms.iter().map(|t| t.as_step()).collect::<Result<Vec<_>>>()?;
    for (idx, f) in steps.iter().enumerate() {
        if let Some(failure) = first_failure(idx, f, g, mode) {
            return Ok(DominationVerdict {
                mode,
                dominated: false,
                failure: Some(failure),
            });
        }
    }
    Ok(DominationVerdict {
        mode,
        dominated: true,
        failure: None,
    })
}

fn first_failure(
    idx: usize,
    f: &StepFunction,
    g: &StepFunction,
    mode: DominationMode,
) -> Option<DominationFailure> {
    let mut pts = f.breakpoints();
    pts.extend(g.breakpoints());
    pts.sort();
    pts.dedup();
    // Both functions are constant on each open cell between breakpoints.
    for w in pts.windows(2) {
        let mid = w[0].midpoint(&w[1]);
        let (fv, gv) = (f.value_at(&mid).abs(), g.value_at(&mid));
        if fv > gv {
            return Some(DominationFailure {
                term: idx,
                cell: Interval::open(w[0].clone(), w[1].clone()).expect("nondegenerate cell"),
                term_value: fv,
                bound_value: gv,
            });
        }
    }
    if mode == DominationMode::Everywhere {
        for p in &pts {
            let (fv, gv) = (f.value_at(p).abs(), g.value_at(p));
            if fv > gv {
                return Some(DominationFailure {
                    term: idx,
                    cell: Interval::point(p.clone()).expect("point in [0, 1]"),
                    term_value: fv,
                    bound_value: gv,
                });
            }
        }
    }
    None
}

/// `q_j` for each `j` in `1..=n`, used to sample probes.
pub fn sample_rationals(n: u64) -> Result<Vec<Rational>> {
    (1..=n).map(enumerate_rationals).collect()
}
