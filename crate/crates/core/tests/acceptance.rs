//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use darboux_core::convergence::{
    cauchy_modulus, dominated_check, in_measure_profile, l1_limit_defect, limit_note,
    pairwise_l1_distance, pointwise_profile, sample_rationals, DominationMode, Mode, Witness,
};
use darboux_core::counterexamples::{
    enumerate_rationals, rational_index, typewriter_interval, FatCoverConfig, SequenceKind,
};
use darboux_core::darboux::{
    darboux_sums, riemann_gap_certificate, robustness_probe, Bound, CellCertificate, DarbouxReport,
    FunctionDescriptor, Partition, WitnessPoint,
};
use darboux_core::exact::{Enclosure, Rational};
use darboux_core::fourier::{
    improper_l2_profile, plancherel_probe, riemann_defect_summary, transform_value, TransformProbe,
};
use darboux_core::functions::{PiecewiseFunction, StepFunction, Value};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ells() -> Vec<FatCoverConfig> {
    [r(1, 2), r(1, 10), r(9, 10)]
        .into_iter()
        .map(|e| FatCoverConfig::new(e).unwrap())
        .collect()
}

fn ok<T>(res: darboux_core::Result<T>) -> Result<T, String> {
    res.map_err(|e| e.to_string())
}

const K: u64 = 20;

fn c1_measure_bounds() -> Check {
    for cfg in ells() {
        let ell = cfg.ell().clone();
        for k in 1..=30 {
            let m = ok(cfg.union(k))?.measure();
            ensure!(m < ell, "ell={ell} k={k}: measure {m} not < ell");
            // Each λ(I_j) <= ℓ·2^{-j}, so every tail partial sum sits below ℓ·2^{-k}.
            let tail = cfg.tail_bound(k);
            for n in [k + 1, k + 10, k + 40] {
                let part = ok(cfg.interval_lengths(k, n))?;
                ensure!(part <= tail, "ell={ell} k={k}: Σ_(k<j<={n}) = {part} > {tail}");
            }
        }
        for j in 1..=80 {
            let len = ok(cfg.interval(j))?.length();
            ensure!(len <= &ell * &Rational::pow2(-(j as i64)), "ell={ell}: λ(I_{j}) too long");
        }
    }
    Ok("3 ells × k<=30 exact".into())
}

fn c2_gap() -> Check {
    let mut lows = Vec::new();
    for cfg in ells() {
        let target = Rational::one() - cfg.ell().clone();
        let g = ok(riemann_gap_certificate(&FunctionDescriptor::FatCoverIndicator { ell: cfg.clone() }, K))?;
        ensure!(*g.lo() >= target, "ell={}: gap lo {} < {target}", cfg.ell(), g.lo());
        lows.push(g.lo().to_decimal());
    }
    let q = ok(riemann_gap_certificate(&FunctionDescriptor::RationalsIndicator, K))?;
    ensure!(q == Enclosure::exact(Rational::one()), "rationals gap {q}");
    Ok(format!("gap lo = {} (ell = 1/2, 1/10, 9/10); rationals gap = 1", lows.join(", ")))
}

/// Every sup witness is a rational in its closed cell that lies in some `I_j`,
/// re-checked here from the enumeration rather than trusting the certificate.
fn verify_sup_witnesses(cfg: &FatCoverConfig, rep: &DarbouxReport, avoid: &[Rational]) -> Result<usize, String> {
    let mut n = 0;
    for w in rep.witnesses.iter().filter(|w| w.bound == Bound::Sup) {
        let Some(WitnessPoint::Rational(x)) = &w.point else {
            return Err(format!("cell {}: no rational sup witness", w.cell));
        };
        ensure!(w.lo <= *x && *x <= w.hi, "cell {}: witness {x} outside [{}, {}]", w.cell, w.lo, w.hi);
        ensure!(!avoid.contains(x), "cell {}: witness {x} is an edited point", w.cell);
        let j = rational_index(x).ok_or(format!("witness {x} not enumerated"))?;
        ensure!(ok(enumerate_rationals(j))? == *x, "enumeration mismatch at {x}");
        // q_j is the centre of I_j; build the interval itself only while the
        // radius ℓ·2^{-j-1} is cheap to represent.
        if j <= 4096 {
            ensure!(ok(cfg.interval(j))?.contains(x), "{x} not in I_{j}");
        }
        ensure!(w.value == Value::Exact(Rational::one()), "cell {}: sup value {:?}", w.cell, w.value);
        ensure!(
            matches!(w.certificate, CellCertificate::RationalInCover { .. }),
            "cell {}: certificate {:?}",
            w.cell,
            w.certificate
        );
        n += 1;
    }
    ensure!(n == rep.cells, "{n} sup witnesses for {} cells", rep.cells);
    Ok(n)
}

fn c3_upper_sums() -> Check {
    let start = Instant::now();
    let cfg = FatCoverConfig::new(r(1, 2)).unwrap();
    let d = FunctionDescriptor::FatCoverIndicator { ell: cfg.clone() };
    let (mut cells, mut unresolved) = (0, 0);
    for seed in 0..50u64 {
        let n = 20 * (seed + 1);
        let p = ok(Partition::random(n, seed))?;
        let rep = ok(darboux_sums(&d, &p, K))?;
        ensure!(rep.upper_sum == Value::Exact(Rational::one()), "seed {seed}: upper {:?}", rep.upper_sum);
        cells += verify_sup_witnesses(&cfg, &rep, &[])?;
        unresolved += rep.unresolved_cells;
    }
    let t = start.elapsed();
    ensure!(t <= Duration::from_secs(60), "took {t:?}");
    Ok(format!("{cells} cells, all witnessed; {unresolved} unresolved inf cells; {t:.1?}"))
}

fn c4_robustness() -> Check {
    let cfg = FatCoverConfig::new(r(1, 2)).unwrap();
    let d = FunctionDescriptor::FatCoverIndicator { ell: cfg.clone() };
    let cert = ok(riemann_gap_certificate(&d, K))?;
    let points = ok(sample_rationals(100))?;
    let mut parts = vec![ok(Partition::uniform(16))?, ok(Partition::uniform(1000))?];
    for seed in 0..5 {
        parts.push(ok(Partition::random(300, seed))?);
    }
    for value in [Rational::zero(), r(1, 2)] {
        let edits: Vec<_> = points.iter().map(|x| (x.clone(), value.clone())).collect();
        for p in &parts {
            let plain = ok(darboux_sums(&d, p, K))?;
            let edited = ok(robustness_probe(&cfg, &edits, p, K))?;
            ensure!(edited.upper_sum == plain.upper_sum, "upper sum moved to {:?}", edited.upper_sum);
            verify_sup_witnesses(&cfg, &edited, &points)?;
            // Edits only lower point values, so every lower sum stays under the
            // cap behind the certificate and the gap bound survives.
            ensure!(
                *edited.gap().lo() >= *cert.lo(),
                "edited gap {} below certificate {}",
                edited.gap(),
                cert
            );
        }
    }
    Ok(format!(
        "100 points edited to 0 and 1/2 on {} partitions; gap stays in {cert}",
        parts.len()
    ))
}

fn c5_cauchy() -> Check {
    let mut ns = Vec::new();
    for cfg in ells() {
        let kind = SequenceKind::GfatCover { ell: cfg.clone() };
        for eps in [r(1, 100), r(1, 1_000_000)] {
            let c = ok(cauchy_modulus(&kind, &eps))?;
            ensure!(cfg.tail_bound(c.n) < eps, "ell={} eps={eps}: ℓ2^-N = {} not < eps", cfg.ell(), cfg.tail_bound(c.n));
            ensure!(c.n == 1 || cfg.tail_bound(c.n - 1) > eps, "N = {} not minimal", c.n);
            for m in c.n + 1..=c.n + 12 {
                let dist = ok(pairwise_l1_distance(&kind, c.n, m))?;
                ensure!(dist.enclosure().hi() < &eps, "dist(G_{}, G_{m}) >= eps", c.n);
            }
            ns.push(format!("{}", c.n));
        }
        // The limit class has no Riemann-integrable representative.
        let g = ok(riemann_gap_certificate(&FunctionDescriptor::FatCoverIndicator { ell: cfg }, K))?;
        ensure!(g.lo().is_positive(), "gap not positive");
    }
    Ok(format!("N = {} (ell × eps)", ns.join(", ")))
}

fn c6_defects() -> Check {
    for cfg in ells() {
        let kind = SequenceKind::GfatCover { ell: cfg.clone() };
        let encs: Vec<Enclosure> = [10, 15, 20]
            .iter()
            .map(|&m| ok(l1_limit_defect(&kind, 3, m)))
            .collect::<Result<_, _>>()?;
        for (e, m) in encs.iter().zip([10u64, 15, 20]) {
            ensure!(e.width() == cfg.tail_bound(m), "ell={} m={m}: width {}", cfg.ell(), e.width());
        }
        ensure!(encs[1].is_within(&encs[0]) && encs[2].is_within(&encs[1]), "not nested");
        let common = encs[0].intersect(&encs[1]).and_then(|e| e.intersect(&encs[2]));
        ensure!(common.is_some(), "no common value");
    }
    Ok("nested, widths ℓ2^-m, common point for 3 ells".into())
}

fn c7_kurtz() -> Check {
    let bound = Rational::pow2(-50);
    for ((j, m), exact) in [((1, 4), r(1, 1)), ((4, 16), r(1, 2)), ((100, 400), r(1, 10))] {
        let d = ok(pairwise_l1_distance(&SequenceKind::Kurtz, j, m))?.enclosure();
        ensure!(d.contains(&exact), "({j},{m}): {d} misses {exact}");
        ensure!(d.width() <= bound, "({j},{m}): width {}", d.width().to_decimal());
    }
    let note = limit_note(&SequenceKind::Kurtz);
    ensure!(note.contains("improperly Riemann integrable"), "note: {note}");
    Ok("enclosures contain 1, 1/2, 1/10 with width <= 2^-50; limit note recorded".into())
}

fn c8_modes() -> Check {
    for eps in [r(1, 1), r(1, 2)] {
        let prof = ok(in_measure_profile(&SequenceKind::Typewriter, &eps, 1024))?;
        ensure!(prof.len() == 1024, "profile length {}", prof.len());
        for (j, m) in &prof {
            let n = 63 - j.leading_zeros();
            ensure!(*m == Rational::pow2(-(n as i64)), "j={j}: {m}");
        }
    }
    let probes = ok(sample_rationals(20))?;
    let mut blocks = 0;
    for x in &probes {
        let v = ok(pointwise_profile(&SequenceKind::Typewriter, x, 1024))?;
        ensure!(v.mode == Mode::Oscillating && v.certified, "x={x}: {:?}", v.mode);
        let Witness::Oscillating { complete_blocks, blocks: ws } = &v.witness else {
            return Err(format!("x={x}: witness {:?}", v.witness));
        };
        // 2^10 - 1 <= 1024 < 2^11 - 1: blocks n = 0..=9 are complete.
        ensure!(*complete_blocks == 10 && ws.len() == 10, "x={x}: {complete_blocks} blocks");
        for w in ws {
            ensure!(ok(typewriter_interval(w.one_at))?.contains(x), "x={x}: one_at {} misses", w.one_at);
            match w.zero_at {
                Some(z) => ensure!(!ok(typewriter_interval(z))?.contains(x), "x={x}: zero_at {z} hits"),
                None => ensure!(w.n < 2, "x={x}: block {} lacks a zero", w.n),
            }
        }
        blocks += ws.len();
    }
    Ok(format!("2^-⌊log2 j⌋ exact for j<=1024; {} probes oscillate ({blocks} blocks checked)", probes.len()))
}

fn c9_domination() -> Check {
    let kind = SequenceKind::GfatCover { ell: FatCoverConfig::new(r(1, 2)).unwrap() };
    let terms: Vec<PiecewiseFunction> = (1..=20).map(|k| ok(kind.term(k))).collect::<Result<_, _>>()?;
    let one: PiecewiseFunction = StepFunction::constant(Rational::one()).into();
    for mode in [DominationMode::AlmostEverywhere, DominationMode::Everywhere] {
        let v = ok(dominated_check(&terms, &one, mode))?;
        ensure!(v.dominated, "{mode:?}: {:?}", v.failure);
    }
    let zero: PiecewiseFunction = StepFunction::zero().into();
    for c in [r(1, 1), r(5, 2), r(10, 1), r(50, 1)] {
        let kmax: u64 = c.floor().to_string().parse::<u64>().unwrap() + 1;
        let scaled: Vec<PiecewiseFunction> = (1..=kmax)
            .map(|k| {
                let t = ok(kind.term(k))?;
                ok(PiecewiseFunction::linear_combine(&Rational::integer(k as i64), &t, &Rational::zero(), &zero))
            })
            .collect::<Result<_, _>>()?;
        let g: PiecewiseFunction = StepFunction::constant(c.clone()).into();
        let v = ok(dominated_check(&scaled, &g, DominationMode::AlmostEverywhere))?;
        let f = v.failure.ok_or(format!("c={c}: reported dominated"))?;
        ensure!(f.cell.length().is_positive(), "c={c}: null witness cell");
        let mid = f.cell.midpoint();
        let actual = scaled[f.term].as_step().unwrap().eval(&mid).unwrap();
        ensure!(actual > c && actual == f.term_value, "c={c}: witness value {actual}");
    }
    Ok("G_1..G_20 <= 1 (ae + everywhere); k·G_k beats c = 1, 5/2, 10, 50 on open cells".into())
}

fn c10_fourier() -> Check {
    let start = Instant::now();
    let half = FatCoverConfig::new(r(1, 2)).unwrap();
    for cfg in ells() {
        for k in 1..=8 {
            let p = ok(TransformProbe::fat_cover(cfg.clone(), k))?;
            let z = ok(transform_value(&p, &Rational::zero(), 64))?;
            let lam = ok(cfg.union(k))?.measure();
            ensure!(z.re == Enclosure::exact(lam.clone()) && z.im == Enclosure::exact(Rational::zero()), "F(0) != λ(A_{k})");
        }
    }
    let p = ok(TransformProbe::fat_cover(half.clone(), 5))?;
    for i in 1..=25i64 {
        let xi = r(i * 7, 13);
        let pos = ok(transform_value(&p, &xi, 64))?;
        let neg = ok(transform_value(&p, &-xi.clone(), 64))?;
        let c = pos.conj();
        ensure!(c.re.overlaps(&neg.re) && c.im.overlaps(&neg.im), "ξ={xi}: conjugate boxes disjoint");
    }
    let rep = ok(plancherel_probe(&TransformProbe::unit_interval(), &Rational::integer(64), 1 << 14))?;
    ensure!(rep.brackets, "unit interval: [{}, {}] misses 1", rep.lower, rep.upper);
    ensure!(rep.slack <= r(1, 500), "slack {}", rep.slack.to_decimal());

    let p = ok(TransformProbe::fat_cover(half.clone(), 4))?;
    let radii = [8, 16, 32, 64].map(Rational::integer);
    let prof = ok(improper_l2_profile(&p, &radii, 1 << 12))?;
    let lam = ok(half.union(4))?.measure();
    ensure!(prof.monotone && prof.bounded && prof.certified, "profile {:?}", prof.mode);
    for e in &prof.entries {
        ensure!(*e.integral.lo() <= lam, "R={}: integral above λ(A_k)", e.r);
    }
    let sum = ok(riemann_defect_summary(&p, K, &radii, 1 << 12))?;
    ensure!(sum.gap_at_least_one_minus_ell == Some(true) && sum.defect, "defect summary: {}", sum.conclusion);
    let t = start.elapsed();
    ensure!(t <= Duration::from_secs(120), "took {t:?}");
    Ok(format!(
        "F(0)=λ(A_k); 25 conjugate pairs; unit slack {}; profile certified; gap >= 1/2; {t:.1?}",
        rep.slack.to_decimal()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fat-cover measure and tail bounds", c1_measure_bounds),
        ("Riemann gap certificates", c2_gap),
        ("upper-sum universality", c3_upper_sums),
        ("robustness under point edits", c4_robustness),
        ("Cauchy modulus", c5_cauchy),
        ("L1 defect enclosures", c6_defects),
        ("Kurtz contrast", c7_kurtz),
        ("mode separation", c8_modes),
        ("domination", c9_domination),
        ("Fourier certificates", c10_fourier),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
