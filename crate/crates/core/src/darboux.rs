//! Partitions, Darboux sums and Riemann-gap certificates.
//!
//! Step functions get exact sums. The indicator of the fat cover `A` and of
//! `ℚ ∩ [0, 1]` are never materialized: every cell is certified separately.
//! Upper sums use a rational witness per open cell (every rational `q_j` lies
//! in `I_j ⊆ A`). For lower sums a closed cell is either inside some `A_k`
//! (`inf = 1`), or loses more measure outside `A_K` than the tail
//! `Σ_{j>K} λ(I_j) <= ℓ·2^{-K}` can cover (`inf = 0`), or stays unresolved and
//! only contributes to the enclosure width.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counterexamples::{rational_index, FatCoverConfig};
use crate::error::{Error, Result};
use crate::exact::{
    irrational_in, simplest_rational_avoiding, simplest_rational_in, Enclosure, Interval,
    IntervalSet, QuadraticIrrational, Rational,
};
use crate::functions::{StepFunction, Value};

/// Default truncation depth for fat-cover certificates.
pub const DEFAULT_DEPTH: u64 = 20;

/// Breakpoints `0 = x_0 < x_1 < ... < x_n = 1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct Partition {
    breakpoints: Vec<Rational>,
}

impl TryFrom<Vec<Rational>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<Rational> {
    fn from(p: Partition) -> Self {
        p.breakpoints
    }
}

impl Partition {
    pub fn new(breakpoints: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPartition("need at least one cell".into()));
        }
        if !breakpoints[0].is_zero() || breakpoints[breakpoints.len() - 1] != Rational::one() {
            return Err(Error::InvalidPartition("must start at 0 and end at 1".into()));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "breakpoints {} and {} are not strictly increasing",
                w[0], w[1]
            )));
        }
        Ok(Partition { breakpoints })
    }

    /// `n` equal cells.
    pub fn uniform(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("need at least one cell".into()));
        }
        Partition::new((0..=n).map(|k| Rational::new(k as i64, n as i64)).collect())
    }

    /// `n` cells with seeded random rational breakpoints of denominator at most
    /// `max(64, 4n)`.
    pub fn random(n: u64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("need at least one cell".into()));
        }
        let max_den = (4 * n).max(64) as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = std::collections::BTreeSet::new();
        while (pts.len() as u64) < n - 1 {
            let d = rng.random_range(2..=max_den);
            let k = rng.random_range(1..d);
            pts.insert(Rational::new(k, d));
        }
        let mut v = vec![Rational::zero()];
        v.extend(pts);
        v.push(Rational::one());
        Partition::new(v)
    }

    /// Every original breakpoint plus each cell midpoint.
    pub fn refine_midpoints(&self) -> Partition {
        let mut v = Vec::with_capacity(2 * self.breakpoints.len());
        for w in self.breakpoints.windows(2) {
            v.push(w[0].clone());
            v.push(w[0].midpoint(&w[1]));
        }
        v.push(Rational::one());
        Partition { breakpoints: v }
    }

    /// Union of the breakpoints of both partitions.
    pub fn common_refinement(&self, other: &Partition) -> Partition {
        let mut v: Vec<Rational> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        v.sort();
        v.dedup();
        Partition { breakpoints: v }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn cell_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.breakpoints.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn mesh(&self) -> Rational {
        self.cells()
            .map(|(a, b)| b - a)
            .max()
            .expect("at least one cell")
    }
}

/// What is being integrated.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "descriptor", rename_all = "snake_case")]
pub enum FunctionDescriptor {
    StepFn { function: StepFunction },
    FatCoverIndicator { ell: FatCoverConfig },
    RationalsIndicator,
}

impl FunctionDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            FunctionDescriptor::StepFn { .. } => "step",
            FunctionDescriptor::FatCoverIndicator { .. } => "fat_cover_indicator",
            FunctionDescriptor::RationalsIndicator => "rationals_indicator",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Sup,
    Inf,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", content = "at", rename_all = "lowercase")]
pub enum WitnessPoint {
    Rational(Rational),
    Irrational(QuadraticIrrational),
}

/// Why a cell's sup or inf has the reported value.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CellCertificate {
    /// Exact extremum of step data, attained at the witness point.
    StepValue,
    /// Rational witness `q_j`; `q_j ∈ I_j ⊆ A`, so the indicator is 1 there.
    RationalInCover { enumeration_index: Option<u64> },
    /// Rational witness for the indicator of `ℚ`.
    RationalPoint,
    /// Irrational witness for the indicator of `ℚ`.
    IrrationalPoint,
    /// The closed cell lies inside `A_k`.
    InsideUnion { k: u64 },
    /// `λ(cell \ A_K)` exceeds the tail bound, so the cell meets the complement
    /// of `A` in positive measure.
    EscapesTail { outside_measure: Rational, tail_bound: Rational },
    /// Neither verdict holds at this depth; the value is only enclosed.
    Unresolved { outside_measure: Rational, tail_bound: Rational },
    /// An edited point value decides the extremum.
    EditedPoint,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CellWitness {
    pub cell: usize,
    pub lo: Rational,
    pub hi: Rational,
    pub bound: Bound,
    pub point: Option<WitnessPoint>,
    pub value: Value,
    pub certificate: CellCertificate,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DarbouxReport {
    pub descriptor: String,
    pub cells: usize,
    pub upper_sum: Value,
    pub lower_sum: Value,
    pub truncation_depth: Option<u64>,
    pub unresolved_cells: usize,
    pub witnesses: Vec<CellWitness>,
}

impl DarbouxReport {
    /// `upper - lower`, enclosed conservatively.
    pub fn gap(&self) -> Enclosure {
        &self.upper_sum.enclosure() - &self.lower_sum.enclosure()
    }
}

fn map_cells<T: Send, F: Fn(usize, &Rational, &Rational) -> T + Sync + Send>(p: &Partition, f: F) -> Vec<T> {
    let b = p.breakpoints();
    crate::par::map_indexed(p.cell_count(), |i| f(i, &b[i], &b[i + 1]))
}

fn value_from(lo: Rational, hi: Rational) -> Value {
    if lo == hi {
        Value::Exact(lo)
    } else {
        Value::Enclosed(Enclosure::new(lo, hi).expect("ordered sum bounds"))
    }
}

pub fn darboux_sums(d: &FunctionDescriptor, p: &Partition, depth: u64) -> Result<DarbouxReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("truncation depth K must be >= 1".into()));
    }
    match d {
        FunctionDescriptor::StepFn { function } => Ok(step_sums(function, p)),
        FunctionDescriptor::RationalsIndicator => rationals_sums(p),
        FunctionDescriptor::FatCoverIndicator { ell } => fat_cover_sums(ell, &BTreeMap::new(), p, depth),
    }
}

/// Darboux sums of `χ_A` after overriding finitely many point values.
pub fn robustness_probe(
    cfg: &FatCoverConfig,
    edits: &[(Rational, Rational)],
    p: &Partition,
    depth: u64,
) -> Result<DarbouxReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("truncation depth K must be >= 1".into()));
    }
    let mut map = BTreeMap::new();
    for (x, v) in edits {
        crate::functions::check_domain(x)?;
        map.insert(x.clone(), v.clone());
    }
    fat_cover_sums(cfg, &map, p, depth)
}

fn step_sums(f: &StepFunction, p: &Partition) -> DarbouxReport {
    let bps = f.breakpoints();
    let per_cell = map_cells(p, |i, a, b| {
        let width = b - a;
        let lo_idx = bps.partition_point(|x| x <= a);
        let hi_idx = bps.partition_point(|x| x < b);
        let mut pts: Vec<Rational> = vec![a.clone()];
        pts.extend(bps[lo_idx..hi_idx].iter().cloned());
        pts.push(b.clone());
        let mut candidates: Vec<Rational> = pts.clone();
        candidates.extend(pts.windows(2).map(|w| w[0].midpoint(&w[1])));
        let valued: Vec<(Rational, Rational)> = candidates
            .into_iter()
            .map(|x| {
                let v = f.value_at(&x);
                (v, x)
            })
            .collect();
        let (sup_v, sup_x) = valued
            .iter()
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
            .cloned()
            .expect("nonempty");
        let (inf_v, inf_x) = valued
            .iter()
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
            .cloned()
            .expect("nonempty");
        let up = &sup_v * &width;
        let low = &inf_v * &width;
        let ws = [
            CellWitness {
                cell: i,
                lo: a.clone(),
                hi: b.clone(),
                bound: Bound::Sup,
                point: Some(WitnessPoint::Rational(sup_x)),
                value: Value::Exact(sup_v),
                certificate: CellCertificate::StepValue,
            },
            CellWitness {
                cell: i,
                lo: a.clone(),
                hi: b.clone(),
                bound: Bound::Inf,
                point: Some(WitnessPoint::Rational(inf_x)),
                value: Value::Exact(inf_v),
                certificate: CellCertificate::StepValue,
            },
        ];
        (up, low, ws)
    });
    let mut upper = Rational::zero();
    let mut lower = Rational::zero();
    let mut witnesses = Vec::with_capacity(2 * per_cell.len());
    for (u, l, ws) in per_cell {
        upper += &u;
        lower += &l;
        witnesses.extend(ws);
    }
    DarbouxReport {
        descriptor: "step".into(),
        cells: p.cell_count(),
        upper_sum: Value::Exact(upper),
        lower_sum: Value::Exact(lower),
        truncation_depth: None,
        unresolved_cells: 0,
        witnesses,
    }
}

fn rationals_sums(p: &Partition) -> Result<DarbouxReport> {
    let per_cell = map_cells(p, |i, a, b| -> Result<[CellWitness; 2]> {
        let open = Interval::open(a.clone(), b.clone())?;
        let r = simplest_rational_in(&open)?;
        let x = irrational_in(&open)?;
        Ok([
            CellWitness {
                cell: i,
                lo: a.clone(),
                hi: b.clone(),
                bound: Bound::Sup,
                point: Some(WitnessPoint::Rational(r)),
                value: Value::Exact(Rational::one()),
                certificate: CellCertificate::RationalPoint,
            },
            CellWitness {
                cell: i,
                lo: a.clone(),
                hi: b.clone(),
                bound: Bound::Inf,
                point: Some(WitnessPoint::Irrational(x)),
                value: Value::Exact(Rational::zero()),
                certificate: CellCertificate::IrrationalPoint,
            },
        ])
    });
    let mut witnesses = Vec::with_capacity(2 * per_cell.len());
    for ws in per_cell {
        witnesses.extend(ws?);
    }
    Ok(DarbouxReport {
        descriptor: "rationals_indicator".into(),
        cells: p.cell_count(),
        upper_sum: Value::Exact(Rational::one()),
        lower_sum: Value::Exact(Rational::zero()),
        truncation_depth: None,
        unresolved_cells: 0,
        witnesses,
    })
}

/// Prefix unions `A_1, ..., A_K` with a containment query.
pub(crate) struct CoverPrefixes {
    unions: Vec<IntervalSet>,
}

impl CoverPrefixes {
    pub(crate) fn new(cfg: &FatCoverConfig, depth: u64) -> Result<Self> {
        let mut unions = Vec::with_capacity(depth as usize);
        let mut raw = Vec::new();
        for j in 1..=depth {
            raw.push(cfg.interval(j)?);
            unions.push(IntervalSet::normalize(raw.clone()));
        }
        Ok(CoverPrefixes { unions })
    }

    pub(crate) fn last(&self) -> &IntervalSet {
        self.unions.last().expect("depth >= 1")
    }

    fn contains_closed(set: &IntervalSet, a: &Rational, b: &Rational) -> bool {
        let comps = set.components();
        let idx = comps.partition_point(|c| c.lo() <= a);
        idx > 0 && comps[idx - 1].contains(a) && comps[idx - 1].contains(b)
    }

    /// Smallest `k` with `[a, b] ⊆ A_k`, if any.
    pub(crate) fn first_containing(&self, a: &Rational, b: &Rational) -> Option<u64> {
        if !Self::contains_closed(self.last(), a, b) {
            return None;
        }
        let idx = self
            .unions
            .partition_point(|s| !Self::contains_closed(s, a, b));
        Some(idx as u64 + 1)
    }

    /// `λ([a, b] ∩ A_K)`.
    pub(crate) fn overlap(&self, a: &Rational, b: &Rational) -> Rational {
        let comps = self.last().components();
        let start = comps.partition_point(|c| c.hi() <= a);
        let mut total = Rational::zero();
        for c in &comps[start..] {
            if c.lo() >= b {
                break;
            }
            let lo = c.lo().clone().max(a.clone());
            let hi = c.hi().clone().min(b.clone());
            if lo < hi {
                total += &(hi - lo);
            }
        }
        total
    }
}

fn fat_cover_sums(
    cfg: &FatCoverConfig,
    edits: &BTreeMap<Rational, Rational>,
    p: &Partition,
    depth: u64,
) -> Result<DarbouxReport> {
    let prefixes = CoverPrefixes::new(cfg, depth)?;
    let tail = cfg.tail_bound(depth);
    let excluded: std::collections::BTreeSet<Rational> = edits.keys().cloned().collect();

    let per_cell = map_cells(p, |i, a, b| -> Result<(Rational, (Rational, Rational), [CellWitness; 2])> {
        let width = b - a;
        let in_cell: Vec<(&Rational, &Rational)> = edits.range(a.clone()..=b.clone()).collect();

        // Supremum: an unedited rational gives 1; edited values may exceed it.
        let open = Interval::open(a.clone(), b.clone())?;
        let r = simplest_rational_avoiding(&open, &excluded)?;
        let mut sup = CellWitness {
            cell: i,
            lo: a.clone(),
            hi: b.clone(),
            bound: Bound::Sup,
            value: Value::Exact(Rational::one()),
            certificate: CellCertificate::RationalInCover {
                enumeration_index: rational_index(&r),
            },
            point: Some(WitnessPoint::Rational(r)),
        };
        if let Some((x, v)) = in_cell.iter().max_by(|a, b| a.1.cmp(b.1)) {
            if **v > Rational::one() {
                sup.value = Value::Exact((*v).clone());
                sup.point = Some(WitnessPoint::Rational((*x).clone()));
                sup.certificate = CellCertificate::EditedPoint;
            }
        }
        let sup_v = sup.value.exact().expect("sup is exact").clone();

        // Infimum over unedited points, then folded with edited values.
        let (mut inf_lo, mut inf_hi, mut cert, mut point) = match prefixes.first_containing(a, b) {
            Some(k) => (Rational::one(), Rational::one(), CellCertificate::InsideUnion { k }, None),
            None => {
                let outside = &width - prefixes.overlap(a, b);
                if outside > tail {
                    (
                        Rational::zero(),
                        Rational::zero(),
                        CellCertificate::EscapesTail {
                            outside_measure: outside,
                            tail_bound: tail.clone(),
                        },
                        None,
                    )
                } else {
                    (
                        Rational::zero(),
                        Rational::one(),
                        CellCertificate::Unresolved {
                            outside_measure: outside,
                            tail_bound: tail.clone(),
                        },
                        None,
                    )
                }
            }
        };
        if let Some((x, v)) = in_cell.iter().min_by(|a, b| a.1.cmp(b.1)) {
            if **v < inf_hi {
                if **v <= inf_lo {
                    cert = CellCertificate::EditedPoint;
                    point = Some(WitnessPoint::Rational((*x).clone()));
                    inf_lo = (*v).clone();
                }
                inf_hi = (*v).clone().min(inf_hi);
            }
        }
        let inf = CellWitness {
            cell: i,
            lo: a.clone(),
            hi: b.clone(),
            bound: Bound::Inf,
            point,
            value: value_from(inf_lo.clone(), inf_hi.clone()),
            certificate: cert,
        };
        Ok((&sup_v * &width, (&inf_lo * &width, &inf_hi * &width), [sup, inf]))
    });

    let mut upper = Rational::zero();
    let mut lower_lo = Rational::zero();
    let mut lower_hi = Rational::zero();
    let mut unresolved = 0;
    let mut witnesses = Vec::with_capacity(2 * per_cell.len());
    for cell in per_cell {
        let (u, (l_lo, l_hi), ws) = cell?;
        if l_lo != l_hi {
            unresolved += 1;
        }
        upper += &u;
        lower_lo += &l_lo;
        lower_hi += &l_hi;
        witnesses.extend(ws);
    }
    if edits.is_empty() {
        // A lower sum never exceeds the Lebesgue integral λ(A) <= λ(A_K) + tail.
        let cap = prefixes.last().measure() + &tail;
        lower_hi = lower_hi.min(cap).min(upper.clone());
    }
    Ok(DarbouxReport {
        descriptor: "fat_cover_indicator".into(),
        cells: p.cell_count(),
        upper_sum: Value::Exact(upper),
        lower_sum: value_from(lower_lo, lower_hi),
        truncation_depth: Some(depth),
        unresolved_cells: unresolved,
        witnesses,
    })
}

/// Certified enclosure of `(upper Darboux integral) - (lower Darboux integral)`.
///
/// Fat cover: every upper sum is 1, and every lower sum is at most
/// `λ(A) <= λ(A_K) + ℓ·2^{-K}`. Rationals: exactly 1. Step functions: the
/// uniform partition into `2^K` cells brackets the gap in `[0, U - L]`.
pub fn riemann_gap_certificate(d: &FunctionDescriptor, depth: u64) -> Result<Enclosure> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth K must be >= 1".into()));
    }
    match d {
        FunctionDescriptor::FatCoverIndicator { ell } => {
            let lower_cap = ell.union(depth)?.measure() + ell.tail_bound(depth);
            Enclosure::new(Rational::one() - lower_cap, Rational::one())
        }
        FunctionDescriptor::RationalsIndicator => Ok(Enclosure::exact(Rational::one())),
        FunctionDescriptor::StepFn { function } => {
            if depth > 62 {
                return Err(Error::InvalidParameter("step refinement depth must be <= 62".into()));
            }
            Enclosure::new(Rational::zero(), uniform_step_gap(function, depth))
        }
    }
}

/// `U - L` on the uniform `2^depth` partition; only cells touching a
/// breakpoint of `f` can contribute.
fn uniform_step_gap(f: &StepFunction, depth: u64) -> Rational {
    let n = 1u64 << depth;
    let width = Rational::pow2(-(depth as i64));
    let mut cells = std::collections::BTreeSet::new();
    for x in f.breakpoints() {
        let scaled = &x * Rational::integer(n as i64);
        let fl = scaled.floor();
        let k: u64 = num_traits::ToPrimitive::to_u64(&fl).unwrap_or(n);
        if k < n {
            cells.insert(k);
        }
        if scaled.is_integer() && k > 0 {
            cells.insert(k - 1);
        }
    }
    cells
        .into_iter()
        .map(|k| {
            let a = Rational::new(k as i64, n as i64);
            let b = &a + &width;
            let (lo, hi) = f.range_on_closed(&a, &b);
            (hi - lo) * &width
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::{enumerate_rationals, SequenceKind};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn half() -> FatCoverConfig {
        FatCoverConfig::default()
    }

    fn sup_points(r: &DarbouxReport) -> Vec<Rational> {
        r.witnesses
            .iter()
            .filter(|w| w.bound == Bound::Sup)
            .map(|w| match &w.point {
                Some(WitnessPoint::Rational(x)) => x.clone(),
                other => panic!("unexpected {other:?}"),
            })
            .collect()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![q(0, 1), q(1, 2), q(1, 2), q(1, 1)]).is_err());
        assert!(Partition::new(vec![q(0, 1)]).is_err());
        assert!(Partition::new(vec![q(1, 8), q(1, 1)]).is_err());
        assert!(Partition::uniform(0).is_err());
        let p = Partition::random(100, 7).unwrap();
        assert_eq!(p.cell_count(), 100);
        assert_eq!(p, Partition::random(100, 7).unwrap());
        assert_ne!(p, Partition::random(100, 8).unwrap());
    }

    #[test]
    fn fat_cover_two_cells() {
        let p = Partition::new(vec![q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        let r = darboux_sums(&FunctionDescriptor::FatCoverIndicator { ell: half() }, &p, 3).unwrap();
        assert_eq!(r.upper_sum, Value::Exact(Rational::one()));
        assert_eq!(r.lower_sum, Value::Exact(Rational::zero()));
        assert_eq!(sup_points(&r), vec![q(1, 3), q(2, 3)]);
        // Measure oracle: λ(A_3) = 1/4 and tail 1/16; each half-cell keeps
        // more than 1/16 outside A_3.
        for w in r.witnesses.iter().filter(|w| w.bound == Bound::Inf) {
            match &w.certificate {
                CellCertificate::EscapesTail { outside_measure, tail_bound } => {
                    assert_eq!(tail_bound, &q(1, 16));
                    assert!(outside_measure > tail_bound);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert_eq!(r.truncation_depth, Some(3));
    }

    #[test]
    fn rationals_two_cells() {
        let p = Partition::new(vec![q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        let r = darboux_sums(&FunctionDescriptor::RationalsIndicator, &p, 1).unwrap();
        assert_eq!(r.upper_sum, Value::Exact(Rational::one()));
        assert_eq!(r.lower_sum, Value::Exact(Rational::zero()));
        for w in &r.witnesses {
            let cell = Interval::open(w.lo.clone(), w.hi.clone()).unwrap();
            match &w.point {
                Some(WitnessPoint::Rational(x)) => assert!(cell.contains(x)),
                Some(WitnessPoint::Irrational(x)) => assert!(cell.contains_irrational(x)),
                None => panic!("missing witness"),
            }
        }
    }

    #[test]
    fn step_sums_on_aligned_partition() {
        let g3 = SequenceKind::GfatCover { ell: half() }.term(3).unwrap();
        let f = g3.as_step().unwrap().clone();
        let p = Partition::new(vec![q(0, 1), q(1, 8), q(15, 32), q(17, 32), q(15, 16), q(1, 1)]).unwrap();
        let r = darboux_sums(&FunctionDescriptor::StepFn { function: f.clone() }, &p, 1).unwrap();
        assert_eq!(r.upper_sum, Value::Exact(q(1, 4)));
        // Closed cells pick up the zero at excluded endpoints: [0, 1/8] has
        // inf 0 because 1/8 ∉ I_1.
        assert_eq!(r.lower_sum, Value::Exact(Rational::zero()));
        assert_eq!(f.integral(), q(1, 4));
    }

    #[test]
    fn step_sums_equal_when_function_is_continuous_on_cells() {
        let f = StepFunction::constant(q(3, 1));
        let p = Partition::uniform(7).unwrap();
        let r = darboux_sums(&FunctionDescriptor::StepFn { function: f.clone() }, &p, 1).unwrap();
        assert_eq!(r.upper_sum, r.lower_sum);
        assert_eq!(r.upper_sum, Value::Exact(f.integral()));
    }

    #[test]
    fn gap_certificates() {
        let g = riemann_gap_certificate(&FunctionDescriptor::FatCoverIndicator { ell: half() }, 10).unwrap();
        assert!(g.lo() >= &q(1, 2));
        assert_eq!(g.hi(), &Rational::one());
        assert_eq!(
            riemann_gap_certificate(&FunctionDescriptor::RationalsIndicator, 1).unwrap(),
            Enclosure::exact(Rational::one())
        );
        let half_ind = StepFunction::indicator(&IntervalSet::from_interval(
            Interval::closed(q(0, 1), q(1, 2)).unwrap(),
        ));
        let g = riemann_gap_certificate(&FunctionDescriptor::StepFn { function: half_ind.clone() }, 10).unwrap();
        assert_eq!(g.lo(), &Rational::zero());
        assert!(g.hi() <= &Rational::pow2(-9));
        // Oracle: brute force over all 2^10 cells.
        let p = Partition::uniform(1024).unwrap();
        let r = darboux_sums(&FunctionDescriptor::StepFn { function: half_ind }, &p, 1).unwrap();
        assert_eq!(r.gap(), Enclosure::exact(g.hi().clone()));
    }

    #[test]
    fn refinement_is_monotone() {
        let d = FunctionDescriptor::FatCoverIndicator { ell: half() };
        let mut p = Partition::uniform(4).unwrap();
        let mut prev = darboux_sums(&d, &p, 12).unwrap();
        for _ in 0..4 {
            p = p.refine_midpoints();
            let next = darboux_sums(&d, &p, 12).unwrap();
            assert!(next.upper_sum.enclosure().hi() <= prev.upper_sum.enclosure().hi());
            assert!(next.lower_sum.enclosure().hi() >= prev.lower_sum.enclosure().lo());
            prev = next;
        }
    }

    #[test]
    fn deeper_truncation_never_widens() {
        let d = FunctionDescriptor::FatCoverIndicator { ell: half() };
        let p = Partition::uniform(64).unwrap();
        let mut prev: Option<Enclosure> = None;
        for k in [4, 8, 12, 16, 20] {
            let lower = darboux_sums(&d, &p, k).unwrap().lower_sum.enclosure();
            if let Some(pr) = &prev {
                assert!(lower.width() <= pr.width());
                assert!(lower.overlaps(pr));
            }
            prev = Some(lower);
        }
    }

    #[test]
    fn edited_point_is_avoided() {
        let p = Partition::new(vec![q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        let r = robustness_probe(&half(), &[(q(1, 3), Rational::zero())], &p, 3).unwrap();
        assert_eq!(r.upper_sum, Value::Exact(Rational::one()));
        let pts = sup_points(&r);
        assert_eq!(pts, vec![q(1, 4), q(2, 3)]);
        let plain = darboux_sums(&FunctionDescriptor::FatCoverIndicator { ell: half() }, &p, 3).unwrap();
        assert_eq!(robustness_probe(&half(), &[], &p, 3).unwrap(), plain);
    }

    #[test]
    fn many_edits_do_not_exhaust_rationals() {
        let p = Partition::uniform(8).unwrap();
        let edits: Vec<(Rational, Rational)> =
            (1..=500).map(|j| (enumerate_rationals(j).unwrap(), Rational::zero())).collect();
        let r = robustness_probe(&half(), &edits, &p, 20).unwrap();
        assert_eq!(r.upper_sum, Value::Exact(Rational::one()));
        for x in sup_points(&r) {
            assert!(!edits.iter().any(|(e, _)| e == &x));
        }
    }

    #[test]
    fn inside_union_certificate() {
        // [1/64, 1/32] sits inside I_1 = [0, 1/8).
        let p = Partition::new(vec![q(0, 1), q(1, 64), q(1, 32), q(1, 1)]).unwrap();
        let r = darboux_sums(&FunctionDescriptor::FatCoverIndicator { ell: half() }, &p, 5).unwrap();
        let infs: Vec<&CellWitness> = r.witnesses.iter().filter(|w| w.bound == Bound::Inf).collect();
        assert_eq!(infs[0].certificate, CellCertificate::InsideUnion { k: 1 });
        assert_eq!(infs[1].certificate, CellCertificate::InsideUnion { k: 1 });
        assert_eq!(r.lower_sum, Value::Exact(q(1, 32)));
    }

    #[test]
    fn unresolved_cells_give_enclosures() {
        // Cell [1/8, 1/8 + 1/2^21] is outside A_K except possibly for later
        // intervals; its outside measure is below the K = 20 tail.
        let tiny = &q(1, 8) + &Rational::pow2(-21);
        let p = Partition::new(vec![q(0, 1), q(1, 8), tiny, q(1, 1)]).unwrap();
        let r = darboux_sums(&FunctionDescriptor::FatCoverIndicator { ell: half() }, &p, 20).unwrap();
        assert_eq!(r.unresolved_cells, 1);
        let lower = r.lower_sum.enclosure();
        assert_eq!(lower.width(), Rational::pow2(-21));
    }
}
