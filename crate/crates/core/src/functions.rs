//! Step functions with finitely many point exceptions, the `x^{-1/2}` tail
//! family, and their L¹ seminorm algebra.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{inv_sqrt_enclosure, sqrt_enclosure, Enclosure, Interval, QuadraticIrrational, Rational};

/// Target width for every enclosure produced by the tail family.
pub const TAIL_BITS: u32 = 62;

/// A real value that is either exact or certified to lie in an enclosure.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(Rational),
    Enclosed(Enclosure),
}

impl Value {
    pub fn enclosure(&self) -> Enclosure {
        match self {
            Value::Exact(r) => Enclosure::exact(r.clone()),
            Value::Enclosed(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Enclosed(_) => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Value::Exact(r) => r == x,
            Value::Enclosed(e) => e.contains(x),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Enclosed(e) => write!(f, "{e}"),
        }
    }
}

/// An evaluation point in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Rational(Rational),
    Irrational(QuadraticIrrational),
}

impl From<Rational> for Point {
    fn from(r: Rational) -> Self {
        Point::Rational(r)
    }
}

impl From<QuadraticIrrational> for Point {
    fn from(x: QuadraticIrrational) -> Self {
        Point::Irrational(x)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub interval: Interval,
    pub value: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exception {
    pub point: Rational,
    pub value: Rational,
}

/// Piecewise constant on finitely many disjoint intervals (0 elsewhere), with
/// finitely many overriding point values.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawStep")]
pub struct StepFunction {
    pieces: Vec<Piece>,
    exceptions: Vec<Exception>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    #[serde(default)]
    pieces: Vec<Piece>,
    #[serde(default)]
    exceptions: Vec<Exception>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;
    fn try_from(r: RawStep) -> Result<Self> {
        StepFunction::new(r.pieces, r.exceptions)
    }
}

impl StepFunction {
    pub fn new(mut pieces: Vec<Piece>, mut exceptions: Vec<Exception>) -> Result<Self> {
        pieces.sort_by(|a, b| {
            a.interval
                .lo()
                .cmp(b.interval.lo())
                .then_with(|| b.interval.lo_closed().cmp(&a.interval.lo_closed()))
        });
        for w in pieces.windows(2) {
            let (a, b) = (&w[0].interval, &w[1].interval);
            let overlap = match a.hi().cmp(b.lo()) {
                Ordering::Greater => true,
                Ordering::Equal => a.hi_closed() && b.lo_closed(),
                Ordering::Less => false,
            };
            if overlap {
                return Err(Error::InvalidParameter(format!("pieces {a} and {b} overlap")));
            }
        }
        exceptions.sort_by(|a, b| a.point.cmp(&b.point));
        for w in exceptions.windows(2) {
            if w[0].point == w[1].point {
                return Err(Error::InvalidParameter(format!(
                    "duplicate exception point {}",
                    w[0].point
                )));
            }
        }
        if let Some(e) = exceptions
            .iter()
            .find(|e| e.point.is_negative() || e.point > Rational::one())
        {
            return Err(Error::OutOfDomain(e.point.to_string()));
        }
        Ok(StepFunction { pieces, exceptions })
    }

    pub fn zero() -> Self {
        StepFunction {
            pieces: vec![],
            exceptions: vec![],
        }
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            return StepFunction::zero();
        }
        StepFunction {
            pieces: vec![Piece {
                interval: Interval::unit(),
                value: c,
            }],
            exceptions: vec![],
        }
    }

    /// `value · χ_S` for a normalized set.
    pub fn indicator_scaled(set: &crate::exact::IntervalSet, value: Rational) -> Self {
        if value.is_zero() {
            return StepFunction::zero();
        }
        StepFunction {
            pieces: set
                .components()
                .iter()
                .map(|c| Piece {
                    interval: c.clone(),
                    value: value.clone(),
                })
                .collect(),
            exceptions: vec![],
        }
    }

    pub fn indicator(set: &crate::exact::IntervalSet) -> Self {
        StepFunction::indicator_scaled(set, Rational::one())
    }

    /// Indicator of finitely many points.
    pub fn point_indicator(points: impl IntoIterator<Item = Rational>) -> Result<Self> {
        StepFunction::new(
            vec![],
            points
                .into_iter()
                .map(|p| Exception {
                    point: p,
                    value: Rational::one(),
                })
                .collect(),
        )
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn exceptions(&self) -> &[Exception] {
        &self.exceptions
    }

    /// Returns a copy with `edits` overriding existing point values.
    pub fn with_point_edits(&self, edits: &[(Rational, Rational)]) -> Result<Self> {
        let mut exceptions: Vec<Exception> = self
            .exceptions
            .iter()
            .filter(|e| !edits.iter().any(|(p, _)| p == &e.point))
            .cloned()
            .collect();
        exceptions.extend(edits.iter().map(|(p, v)| Exception {
            point: p.clone(),
            value: v.clone(),
        }));
        StepFunction::new(self.pieces.clone(), exceptions)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        check_domain(x)?;
        Ok(self.value_at(x))
    }

    pub(crate) fn value_at(&self, x: &Rational) -> Rational {
        if let Ok(i) = self.exceptions.binary_search_by(|e| e.point.cmp(x)) {
            return self.exceptions[i].value.clone();
        }
        self.piece_value_at(x)
    }

    fn piece_value_at(&self, x: &Rational) -> Rational {
        // Pieces are sorted and disjoint; at most two can start at or before x
        // and still matter (a closed point piece followed by an open one).
        let idx = self.pieces.partition_point(|p| p.interval.lo() <= x);
        self.pieces[..idx]
            .iter()
            .rev()
            .take(2)
            .find(|p| p.interval.contains(x))
            .map_or_else(Rational::zero, |p| p.value.clone())
    }

    pub fn eval_irrational(&self, x: &QuadraticIrrational) -> Result<Rational> {
        check_domain_irrational(x)?;
        Ok(self
            .pieces
            .iter()
            .find(|p| p.interval.contains_irrational(x))
            .map_or_else(Rational::zero, |p| p.value.clone()))
    }

    /// Every point where the function may jump: piece endpoints, exception
    /// points, 0 and 1. Sorted, deduplicated.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut pts = vec![Rational::zero(), Rational::one()];
        for p in &self.pieces {
            pts.push(p.interval.lo().clone());
            pts.push(p.interval.hi().clone());
        }
        pts.extend(self.exceptions.iter().map(|e| e.point.clone()));
        pts.sort();
        pts.dedup();
        pts
    }

    /// Exact L¹ seminorm; exceptions and degenerate pieces contribute nothing.
    pub fn l1(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.value.abs() * p.interval.length())
            .sum()
    }

    /// Exact integral over `[0, 1]`.
    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| &p.value * p.interval.length())
            .sum()
    }

    /// `(inf, sup)` over the closed interval `[a, b]`, `a < b`.
    pub fn range_on_closed(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        let mut pts: Vec<Rational> = vec![a.clone(), b.clone()];
        pts.extend(self.breakpoints().into_iter().filter(|p| a < p && p < b));
        pts.sort();
        let mut lo = self.value_at(&pts[0]);
        let mut hi = lo.clone();
        let mut see = |v: Rational| {
            if v < lo {
                lo = v.clone();
            }
            if v > hi {
                hi = v;
            }
        };
        for w in pts.windows(2) {
            see(self.value_at(&w[1]));
            see(self.value_at(&w[0].midpoint(&w[1])));
        }
        (lo, hi)
    }

    /// Canonical form from membership data on a grid `0 = p0 < ... < pn = 1`:
    /// `at_point[i]` is the value at `p_i`, `on_cell[i]` the value on `(p_i, p_{i+1})`.
    pub(crate) fn from_profile(points: &[Rational], at_point: &[Rational], on_cell: &[Rational]) -> Self {
        let n = on_cell.len();
        let mut pieces = Vec::new();
        let mut exceptions = Vec::new();
        let mut absorbed = vec![false; points.len()];
        let mut i = 0;
        while i < n {
            let v = &on_cell[i];
            if v.is_zero() {
                i += 1;
                continue;
            }
            let mut j = i;
            while j + 1 < n && on_cell[j + 1] == *v {
                j += 1;
            }
            // Run of cells i..=j with value v; interior points that disagree
            // become exceptions.
            for m in (i + 1)..=j {
                absorbed[m] = true;
                if at_point[m] != *v {
                    exceptions.push(Exception {
                        point: points[m].clone(),
                        value: at_point[m].clone(),
                    });
                }
            }
            let lo_closed = at_point[i] == *v;
            let hi_closed = at_point[j + 1] == *v;
            absorbed[i] |= lo_closed;
            absorbed[j + 1] |= hi_closed;
            pieces.push(Piece {
                interval: Interval::new(points[i].clone(), points[j + 1].clone(), lo_closed, hi_closed)
                    .expect("grid cells are valid intervals"),
                value: v.clone(),
            });
            i = j + 1;
        }
        for (m, p) in points.iter().enumerate() {
            if !absorbed[m] && !at_point[m].is_zero() {
                exceptions.push(Exception {
                    point: p.clone(),
                    value: at_point[m].clone(),
                });
            }
        }
        StepFunction::new(pieces, exceptions).expect("profile pieces are disjoint")
    }

    /// Exact pointwise `a·f + b·g`, returned in canonical form.
    pub fn linear_combine(a: &Rational, f: &StepFunction, b: &Rational, g: &StepFunction) -> Self {
        let mut pts = f.breakpoints();
        pts.extend(g.breakpoints());
        pts.sort();
        pts.dedup();
        let combo = |x: &Rational| a * f.value_at(x) + b * g.value_at(x);
        let at_point: Vec<Rational> = pts.iter().map(combo).collect();
        let on_cell: Vec<Rational> = pts
            .windows(2)
            .map(|w| combo(&w[0].midpoint(&w[1])))
            .collect();
        StepFunction::from_profile(&pts, &at_point, &on_cell)
    }

    /// The same function in canonical form (maximal pieces, minimal exceptions).
    pub fn canonical(&self) -> Self {
        StepFunction::linear_combine(&Rational::one(), self, &Rational::zero(), &StepFunction::zero())
    }

    /// Exact decision of `f = g` almost everywhere.
    pub fn ae_equal(&self, other: &StepFunction) -> bool {
        let mut pts = self.breakpoints();
        pts.extend(other.breakpoints());
        pts.sort();
        pts.dedup();
        pts.windows(2).all(|w| {
            let m = w[0].midpoint(&w[1]);
            self.value_at(&m) == other.value_at(&m)
        })
    }
}

/// `f_j(x) = 0` on `[0, 1/j]` and `x^{-1/2}` on `(1/j, 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawKurtz", into = "RawKurtz")]
pub struct KurtzTail {
    j: u64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KurtzTag {
    Kurtz,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKurtz {
    kind: KurtzTag,
    j: u64,
}

impl TryFrom<RawKurtz> for KurtzTail {
    type Error = Error;
    fn try_from(r: RawKurtz) -> Result<Self> {
        KurtzTail::new(r.j)
    }
}

impl From<KurtzTail> for RawKurtz {
    fn from(k: KurtzTail) -> Self {
        RawKurtz {
            kind: KurtzTag::Kurtz,
            j: k.j,
        }
    }
}

impl KurtzTail {
    pub fn new(j: u64) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidParameter("tail index j must be >= 1".into()));
        }
        Ok(KurtzTail { j })
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn cutoff(&self) -> Rational {
        Rational::new(1, self.j as i64)
    }

    pub fn eval(&self, x: &Rational) -> Result<Value> {
        check_domain(x)?;
        if *x <= self.cutoff() {
            return Ok(Value::Exact(Rational::zero()));
        }
        let e = inv_sqrt_enclosure(x, TAIL_BITS)?;
        Ok(if e.is_exact() {
            Value::Exact(e.lo().clone())
        } else {
            Value::Enclosed(e)
        })
    }

    pub fn eval_irrational(&self, x: &QuadraticIrrational) -> Result<Value> {
        check_domain_irrational(x)?;
        if x.cmp_rational(&self.cutoff()) == Ordering::Less {
            return Ok(Value::Exact(Rational::zero()));
        }
        // Enclose x through √2, then use that t ↦ t^{-1/2} is decreasing.
        let s2 = sqrt_enclosure(&Rational::integer(2), TAIL_BITS + 8)?;
        let xs = Enclosure::exact(x.p().clone()) + s2.scale(x.q());
        let lo = inv_sqrt_enclosure(xs.hi(), TAIL_BITS + 2)?;
        let hi = inv_sqrt_enclosure(xs.lo(), TAIL_BITS + 2)?;
        Ok(Value::Enclosed(
            Enclosure::new(lo.lo().clone(), hi.hi().clone())?,
        ))
    }

    /// `‖f_j‖₁ = 2(1 - j^{-1/2})`, enclosed.
    pub fn l1(&self) -> Enclosure {
        let r = inv_sqrt_enclosure(&Rational::integer(self.j as i64), TAIL_BITS)
            .expect("j >= 1");
        (Enclosure::exact(Rational::one()) - r).scale(&Rational::integer(2))
    }
}

/// A function on `[0, 1]`: exact step data or the symbolic tail family.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PiecewiseFunction {
    Kurtz(KurtzTail),
    Step(StepFunction),
}

impl PiecewiseFunction {
    pub fn eval(&self, x: &Point) -> Result<Value> {
        match (self, x) {
            (PiecewiseFunction::Step(s), Point::Rational(r)) => s.eval(r).map(Value::Exact),
            (PiecewiseFunction::Step(s), Point::Irrational(q)) => {
                s.eval_irrational(q).map(Value::Exact)
            }
            (PiecewiseFunction::Kurtz(k), Point::Rational(r)) => k.eval(r),
            (PiecewiseFunction::Kurtz(k), Point::Irrational(q)) => k.eval_irrational(q),
        }
    }

    pub fn as_step(&self) -> Result<&StepFunction> {
        match self {
            PiecewiseFunction::Step(s) => Ok(s),
            PiecewiseFunction::Kurtz(_) => Err(Error::KindMismatch),
        }
    }

    pub fn seminorm_l1(&self) -> Value {
        match self {
            PiecewiseFunction::Step(s) => Value::Exact(s.l1()),
            PiecewiseFunction::Kurtz(k) => Value::Enclosed(k.l1()),
        }
    }

    pub fn linear_combine(
        a: &Rational,
        f: &PiecewiseFunction,
        b: &Rational,
        g: &PiecewiseFunction,
    ) -> Result<PiecewiseFunction> {
        Ok(PiecewiseFunction::Step(StepFunction::linear_combine(
            a,
            f.as_step()?,
            b,
            g.as_step()?,
        )))
    }

    pub fn ae_equal(f: &PiecewiseFunction, g: &PiecewiseFunction) -> Result<bool> {
        Ok(f.as_step()?.ae_equal(g.as_step()?))
    }
}

impl From<StepFunction> for PiecewiseFunction {
    fn from(s: StepFunction) -> Self {
        PiecewiseFunction::Step(s)
    }
}

impl From<KurtzTail> for PiecewiseFunction {
    fn from(k: KurtzTail) -> Self {
        PiecewiseFunction::Kurtz(k)
    }
}

/// The class `[f]` of functions equal to `f` almost everywhere.
#[derive(Clone, Debug)]
pub struct AeClass {
    representative: PiecewiseFunction,
}

impl AeClass {
    pub fn new(representative: PiecewiseFunction) -> Self {
        AeClass { representative }
    }

    pub fn representative(&self) -> &PiecewiseFunction {
        &self.representative
    }
}

impl PartialEq for AeClass {
    fn eq(&self, other: &Self) -> bool {
        match (&self.representative, &other.representative) {
            (PiecewiseFunction::Step(a), PiecewiseFunction::Step(b)) => a.ae_equal(b),
            (PiecewiseFunction::Kurtz(a), PiecewiseFunction::Kurtz(b)) => a == b,
            _ => false,
        }
    }
}

pub(crate) fn check_domain(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    Ok(())
}

fn check_domain_irrational(x: &QuadraticIrrational) -> Result<()> {
    if x.cmp_rational(&Rational::zero()) == Ordering::Less
        || x.cmp_rational(&Rational::one()) == Ordering::Greater
    {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntervalSet;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn g3() -> StepFunction {
        // χ of A_3 for ℓ = 1/2.
        StepFunction::indicator(&IntervalSet::normalize(vec![
            Interval::new(q(0, 1), q(1, 8), true, false).unwrap(),
            Interval::new(q(15, 16), q(1, 1), false, true).unwrap(),
            Interval::open(q(15, 32), q(17, 32)).unwrap(),
        ]))
    }

    fn g2() -> StepFunction {
        StepFunction::indicator(&IntervalSet::normalize(vec![
            Interval::new(q(0, 1), q(1, 8), true, false).unwrap(),
            Interval::new(q(15, 16), q(1, 1), false, true).unwrap(),
        ]))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(g3().eval(&q(1, 16)).unwrap(), Rational::one());
        let f = StepFunction::point_indicator([q(1, 2)]).unwrap();
        assert_eq!(f.eval(&q(1, 3)).unwrap(), Rational::zero());
        assert_eq!(f.eval(&q(1, 2)).unwrap(), Rational::one());
        assert!(f.eval(&q(3, 2)).is_err());
        let k = KurtzTail::new(4).unwrap();
        assert_eq!(k.eval(&q(1, 4)).unwrap(), Value::Exact(Rational::zero()));
        assert_eq!(k.eval(&q(1, 1)).unwrap(), Value::Exact(Rational::one()));
        let v = k.eval(&q(1, 2)).unwrap().enclosure();
        assert!(v.width() <= Rational::pow2(-60));
        // (1/2)^{-1/2} = √2.
        assert!(v.lo().square() < q(2, 1) && v.hi().square() > q(2, 1));
    }

    #[test]
    fn exceptions_take_priority() {
        let f = g3().with_point_edits(&[(q(1, 16), q(5, 1))]).unwrap();
        assert_eq!(f.eval(&q(1, 16)).unwrap(), q(5, 1));
        assert_eq!(f.eval(&q(1, 32)).unwrap(), Rational::one());
    }

    #[test]
    fn irrational_evaluation() {
        let x = crate::exact::irrational_in(&Interval::open(q(15, 32), q(17, 32)).unwrap()).unwrap();
        assert_eq!(g3().eval_irrational(&x).unwrap(), Rational::one());
        let y = crate::exact::irrational_in(&Interval::open(q(1, 4), q(3, 8)).unwrap()).unwrap();
        assert_eq!(g3().eval_irrational(&y).unwrap(), Rational::zero());
        assert_eq!(
            KurtzTail::new(2).unwrap().eval_irrational(&y).unwrap(),
            Value::Exact(Rational::zero())
        );
        let k = KurtzTail::new(4).unwrap();
        let v = k.eval_irrational(&y).unwrap().enclosure();
        let xf = y.to_f64();
        assert!(v.lo().to_f64() <= xf.powf(-0.5) + 1e-12 && xf.powf(-0.5) - 1e-12 <= v.hi().to_f64());
    }

    #[test]
    fn linear_combination_of_g2_g3() {
        let d = StepFunction::linear_combine(&Rational::one(), &g2(), &q(-1, 1), &g3());
        // Pointwise probe oracle at 200 rationals.
        for k in 0..200 {
            let x = q(k, 199);
            let expect = if Interval::open(q(15, 32), q(17, 32)).unwrap().contains(&x) {
                q(-1, 1)
            } else {
                Rational::zero()
            };
            assert_eq!(d.eval(&x).unwrap(), expect, "at {x}");
        }
        assert_eq!(d.pieces().len(), 1);
        assert!(d.exceptions().is_empty());
    }

    #[test]
    fn trivial_combinations() {
        let f = g3();
        let z = StepFunction::linear_combine(&Rational::zero(), &f, &Rational::zero(), &g2());
        assert_eq!(z, StepFunction::zero());
        let same = StepFunction::linear_combine(&Rational::one(), &f, &Rational::zero(), &g2());
        assert_eq!(same, f);
    }

    #[test]
    fn seminorms() {
        let f = StepFunction::point_indicator((1..=5).map(|k| q(1, k))).unwrap();
        assert_eq!(f.l1(), Rational::zero());
        let three = StepFunction::indicator_scaled(
            &IntervalSet::from_interval(Interval::open(q(0, 1), q(1, 3)).unwrap()),
            q(3, 1),
        );
        assert_eq!(three.l1(), Rational::one());
        // Antiderivative oracle: 2√x from 1/4 to 1 = 2 - 1 = 1.
        let k = PiecewiseFunction::Kurtz(KurtzTail::new(4).unwrap());
        let v = k.seminorm_l1();
        assert!(v.contains(&Rational::one()));
        assert!(v.enclosure().width() <= Rational::pow2(-60));
    }

    #[test]
    fn ae_equality_examples() {
        let closed = StepFunction::indicator(&IntervalSet::from_interval(
            Interval::closed(q(0, 1), q(1, 2)).unwrap(),
        ));
        let half_open = StepFunction::indicator(&IntervalSet::from_interval(
            Interval::new(q(0, 1), q(1, 2), true, false).unwrap(),
        ));
        assert!(closed.ae_equal(&half_open));
        assert!(!g2().ae_equal(&g3()));
        let diff = StepFunction::linear_combine(&Rational::one(), &g3(), &q(-1, 1), &g2());
        assert_eq!(diff.l1(), q(1, 16));
        assert!(g3().ae_equal(&g3()));
        let a = AeClass::new(closed.into());
        let b = AeClass::new(half_open.into());
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_kinds_rejected() {
        let k: PiecewiseFunction = KurtzTail::new(3).unwrap().into();
        let s: PiecewiseFunction = g3().into();
        assert_eq!(
            PiecewiseFunction::linear_combine(&Rational::one(), &k, &Rational::one(), &s),
            Err(Error::KindMismatch)
        );
        assert!(PiecewiseFunction::ae_equal(&k, &s).is_err());
        assert!(KurtzTail::new(0).is_err());
    }

    #[test]
    fn canonical_profile_keeps_isolated_points() {
        let f = StepFunction::new(
            vec![Piece {
                interval: Interval::point(q(1, 3)).unwrap(),
                value: q(2, 1),
            }],
            vec![],
        )
        .unwrap();
        let c = f.canonical();
        assert!(c.pieces().is_empty());
        assert_eq!(c.exceptions().len(), 1);
        assert_eq!(c.eval(&q(1, 3)).unwrap(), q(2, 1));
    }

    #[test]
    fn range_on_closed_cells() {
        let g = g3();
        assert_eq!(g.range_on_closed(&q(0, 1), &q(1, 8)), (Rational::zero(), Rational::one()));
        assert_eq!(g.range_on_closed(&q(0, 1), &q(1, 16)), (Rational::one(), Rational::one()));
        assert_eq!(g.range_on_closed(&q(1, 8), &q(15, 32)), (Rational::zero(), Rational::zero()));
    }

    #[test]
    fn json_formats() {
        let k: PiecewiseFunction = KurtzTail::new(7).unwrap().into();
        let j = serde_json::to_value(&k).unwrap();
        assert_eq!(j, serde_json::json!({"kind": "kurtz", "j": 7}));
        assert_eq!(serde_json::from_value::<PiecewiseFunction>(j).unwrap(), k);
        let s: PiecewiseFunction = g3().into();
        let j = serde_json::to_value(&s).unwrap();
        assert!(j["pieces"].is_array() && j["exceptions"].is_array());
        assert_eq!(serde_json::from_value::<PiecewiseFunction>(j).unwrap(), s);
    }
}
