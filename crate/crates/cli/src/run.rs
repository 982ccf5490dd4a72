//! Dispatch: one experiment in, one report (and optional plot table) out.

use anyhow::{anyhow, bail, Result};
use serde::Serialize;
use serde_json::{json, Value as Json};

use darboux_core::convergence::{
    cauchy_modulus, dominated_check, fat_cover_profile_irrational, in_measure_profile,
    l1_limit_defect, limit_note, pointwise_profile, DominationMode, TraceEntry,
};
use darboux_core::counterexamples::SequenceKind;
use darboux_core::darboux::{
    darboux_sums, riemann_gap_certificate, robustness_probe, FunctionDescriptor, DEFAULT_DEPTH,
};
use darboux_core::exact::{Enclosure, QuadraticIrrational, Rational};
use darboux_core::fourier::{
    decay_bound, improper_l2_profile, plancherel_probe, riemann_defect_summary, transform_value,
    Direction, TransformProbe,
};
use darboux_core::functions::{PiecewiseFunction, Point, StepFunction, Value};

use crate::config::ExperimentConfig;

/// Rows of exact cells; decimal columns are added on output.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Table {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Json,
    pub table: Option<Table>,
    /// A certified negative verdict (exit status 2).
    pub certified_failure: bool,
}

impl Outcome {
    fn ok(report: Json) -> Outcome {
        Outcome { report, table: None, certified_failure: false }
    }
}

fn core<T>(r: darboux_core::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("{e}"))
}

fn to_json<T: Serialize>(v: &T) -> Result<Json> {
    Ok(serde_json::to_value(v)?)
}

fn s(r: &Rational) -> String {
    r.to_string()
}

pub fn run(c: &ExperimentConfig) -> Result<Outcome> {
    match c.command.as_str() {
        "cauchy" => cauchy(c),
        "defect" => defect(c),
        "pointwise" => pointwise(c),
        "inmeasure" => inmeasure(c),
        "dominate" => dominate(c),
        "darboux" => darboux(c),
        "gap" => gap(c),
        "ft" => ft(c),
        "plancherel" => plancherel(c),
        "l2profile" => l2profile(c),
        "fourier-defect" => fourier_defect(c),
        "term" => term(c),
        other => bail!("unknown command {other:?}"),
    }
}

fn cauchy(c: &ExperimentConfig) -> Result<Outcome> {
    let kind = c.kind()?;
    let eps = ExperimentConfig::rational(&c.eps, "--eps")?;
    let cert = core(cauchy_modulus(&kind, &eps))?;
    let tag = match kind {
        SequenceKind::GfatCover { .. } => "tail<=ell*2^-k",
        SequenceKind::Kurtz => "2*N^-1/2<=eps",
        _ => "terms-null",
    };
    Ok(Outcome::ok(json!({
        "command": "cauchy",
        "kind": cert.kind,
        "eps": cert.eps,
        "N": cert.n,
        "certificate": tag,
        "bound": cert.bound,
        "reason": cert.reason,
        "limit_note": limit_note(&kind),
    })))
}

fn defect(c: &ExperimentConfig) -> Result<Outcome> {
    let kind = c.kind()?;
    let k = ExperimentConfig::need(&c.k, "--k")?;
    let m = ExperimentConfig::need(&c.probe_m, "--probe-m")?;
    let enc = core(l1_limit_defect(&kind, k, m))?;
    Ok(Outcome::ok(json!({
        "command": "defect",
        "kind": kind.to_string(),
        "k": k,
        "probe_m": m,
        "defect": enc,
        "width": enc.width(),
        "limit_note": limit_note(&kind),
    })))
}

fn trace_table(trace: &[TraceEntry]) -> Table {
    if trace.iter().all(|t| t.value.exact().is_some()) {
        let mut t = Table::new(&["j", "value"]);
        for e in trace {
            t.rows.push(vec![e.j.to_string(), s(e.value.exact().expect("checked"))]);
        }
        t
    } else {
        let mut t = Table::new(&["j", "value_lo", "value_hi"]);
        for e in trace {
            let enc = e.value.enclosure();
            t.rows.push(vec![e.j.to_string(), s(enc.lo()), s(enc.hi())]);
        }
        t
    }
}

fn pointwise(c: &ExperimentConfig) -> Result<Outcome> {
    let kind = c.kind()?;
    let x = ExperimentConfig::rational(&c.x, "--x")?;
    let jmax = c.jmax.unwrap_or(64);
    let verdict = match (&c.sqrt2, &kind) {
        (None, _) => core(pointwise_profile(&kind, &x, jmax))?,
        (Some(q), SequenceKind::GfatCover { ell }) => {
            let probe = core(QuadraticIrrational::new(x, q.parse()?))?;
            core(fat_cover_profile_irrational(ell, &probe, jmax))?
        }
        (Some(_), _) => bail!("irrational probes are supported for kind G only"),
    };
    let table = trace_table(&verdict.trace);
    let mut report = to_json(&verdict)?;
    report["command"] = json!("pointwise");
    report["limit_note"] = json!(limit_note(&kind));
    Ok(Outcome { report, table: Some(table), certified_failure: false })
}

fn inmeasure(c: &ExperimentConfig) -> Result<Outcome> {
    let kind = c.kind()?;
    let eps = ExperimentConfig::rational(&c.eps, "--eps")?;
    let jmax = c.jmax.unwrap_or(64);
    let profile = core(in_measure_profile(&kind, &eps, jmax))?;
    let mut table = Table::new(&["j", "measure"]);
    for (j, m) in &profile {
        table.rows.push(vec![j.to_string(), s(m)]);
    }
    let rows: Vec<Json> = profile.iter().map(|(j, m)| json!({"j": j, "measure": m})).collect();
    Ok(Outcome {
        report: json!({
            "command": "inmeasure",
            "kind": kind.to_string(),
            "eps": eps,
            "jmax": jmax,
            "last": profile.last().map(|(_, m)| m.clone()),
            "profile": rows,
            "limit_note": limit_note(&kind),
        }),
        table: Some(table),
        certified_failure: false,
    })
}

fn dominate(c: &ExperimentConfig) -> Result<Outcome> {
    let kind = c.kind()?;
    let jmax = c.jmax.unwrap_or(16);
    if jmax == 0 {
        bail!("--jmax must be >= 1");
    }
    let g_val = match c.g.as_deref().unwrap_or("one") {
        "one" => Rational::one(),
        "zero" => Rational::zero(),
        other => crate::config::parse_rational(other)?,
    };
    let mode = match c.mode.as_deref().unwrap_or("ae") {
        "ae" | "almost-everywhere" => DominationMode::AlmostEverywhere,
        "everywhere" => DominationMode::Everywhere,
        other => bail!("unknown domination mode {other:?} (expected ae or everywhere)"),
    };
    let scaled = c.scaled.unwrap_or(false);
    let zero: PiecewiseFunction = StepFunction::zero().into();
    let terms = (1..=jmax)
        .map(|j| {
            let t = core(kind.term(j))?;
            if scaled {
                core(PiecewiseFunction::linear_combine(
                    &Rational::integer(j as i64),
                    &t,
                    &Rational::zero(),
                    &zero,
                ))
            } else {
                Ok(t)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let g: PiecewiseFunction = StepFunction::constant(g_val.clone()).into();
    let verdict = core(dominated_check(&terms, &g, mode))?;
    let failed = !verdict.dominated;
    let mut report = to_json(&verdict)?;
    report["command"] = json!("dominate");
    report["kind"] = json!(kind.to_string());
    report["jmax"] = json!(jmax);
    report["scaled"] = json!(scaled);
    report["g"] = json!(g_val);
    if let Some(f) = &verdict.failure {
        // Terms are reported 1-based, like the sequence index.
        report["failure"]["j"] = json!(f.term + 1);
    }
    Ok(Outcome { report, table: None, certified_failure: failed })
}

fn descriptor(c: &ExperimentConfig) -> Result<FunctionDescriptor> {
    Ok(match c.function.as_deref().unwrap_or("fat") {
        "fat" => FunctionDescriptor::FatCoverIndicator { ell: c.fat_cover()? },
        "rationals" => FunctionDescriptor::RationalsIndicator,
        "term" => {
            let kind = c.kind()?;
            let j = ExperimentConfig::need(&c.j, "--j")?;
            let t = core(kind.term(j))?;
            let step = core(t.as_step()).map_err(|_| anyhow!("{kind} terms are not step functions"))?;
            FunctionDescriptor::StepFn { function: step.clone() }
        }
        other => bail!("unknown function {other:?} (expected fat, rationals or term)"),
    })
}

fn value_cells(v: &Value) -> (String, String) {
    let e = v.enclosure();
    (s(e.lo()), s(e.hi()))
}

fn darboux(c: &ExperimentConfig) -> Result<Outcome> {
    let d = descriptor(c)?;
    let p = c.partition()?;
    let depth = c.depth.unwrap_or(DEFAULT_DEPTH);
    let edits = c.edits()?;
    let report = if edits.is_empty() {
        core(darboux_sums(&d, &p, depth))?
    } else {
        let FunctionDescriptor::FatCoverIndicator { ell } = &d else {
            bail!("--edit applies to the fat-cover indicator only");
        };
        core(robustness_probe(ell, &edits, &p, depth))?
    };
    let mut table = Table::new(&["cell", "lo", "hi", "bound", "point", "value_lo", "value_hi", "certificate"]);
    for w in &report.witnesses {
        let point = match &w.point {
            Some(darboux_core::darboux::WitnessPoint::Rational(r)) => s(r),
            Some(darboux_core::darboux::WitnessPoint::Irrational(q)) => q.to_string(),
            None => String::new(),
        };
        let (vlo, vhi) = value_cells(&w.value);
        let cert = to_json(&w.certificate)?["reason"].as_str().unwrap_or_default().to_string();
        let bound = to_json(&w.bound)?.as_str().unwrap_or_default().to_string();
        table.rows.push(vec![w.cell.to_string(), s(&w.lo), s(&w.hi), bound, point, vlo, vhi, cert]);
    }
    let gap = report.gap();
    let mut json = to_json(&report)?;
    json["command"] = json!("darboux");
    json["gap"] = to_json(&gap)?;
    json["edits"] = json!(edits.len());
    Ok(Outcome { report: json, table: Some(table), certified_failure: false })
}

fn gap(c: &ExperimentConfig) -> Result<Outcome> {
    let d = descriptor(c)?;
    let depth = c.depth.unwrap_or(DEFAULT_DEPTH);
    let gap = core(riemann_gap_certificate(&d, depth))?;
    let mut report = json!({
        "command": "gap",
        "descriptor": d.name(),
        "K": depth,
        "gap_lower": gap.lo(),
        "gap_upper": gap.hi(),
    });
    let mut failed = false;
    if let FunctionDescriptor::FatCoverIndicator { ell } = &d {
        let target = Rational::one() - ell.ell().clone();
        let ok = *gap.lo() >= target;
        failed = !ok;
        report["ell"] = json!(ell.ell());
        report["one_minus_ell"] = json!(target);
        report["at_least_one_minus_ell"] = json!(ok);
    }
    Ok(Outcome { report, table: None, certified_failure: failed })
}

fn probe(c: &ExperimentConfig) -> Result<TransformProbe> {
    let p = match c.source.as_deref().unwrap_or("fat") {
        "fat" => core(TransformProbe::fat_cover(
            c.fat_cover()?,
            ExperimentConfig::need(&c.k, "--k")?,
        ))?,
        "unit" => TransformProbe::unit_interval(),
        other => bail!("unknown source {other:?} (expected fat or unit)"),
    };
    let dir = match c.direction.as_deref() {
        None | Some("inverse") => Direction::Inverse,
        Some("forward") => Direction::Forward,
        Some(other) => bail!("unknown direction {other:?} (expected forward or inverse)"),
    };
    let untruncated = c.untruncated.unwrap_or(false);
    if untruncated && p.truncation_slack().is_none() {
        bail!("--untruncated applies to fat-cover sources only");
    }
    Ok(p.with_direction(dir).with_untruncated(untruncated))
}

fn enc_pair(e: &Enclosure) -> [String; 2] {
    [s(e.lo()), s(e.hi())]
}

fn ft(c: &ExperimentConfig) -> Result<Outcome> {
    let p = probe(c)?;
    let freqs = ExperimentConfig::rationals(&c.freq, "--freq")?;
    let prec = c.prec.unwrap_or(64);
    let mut table = Table::new(&["freq", "re_lo", "re_hi", "im_lo", "im_hi", "abs_lo", "abs_hi"]);
    let mut values = Vec::with_capacity(freqs.len());
    for f in &freqs {
        let z = core(transform_value(&p, f, prec))?;
        let abs = z.modulus(prec);
        let mut row = vec![s(f)];
        row.extend(enc_pair(&z.re));
        row.extend(enc_pair(&z.im));
        row.extend(enc_pair(&abs));
        table.rows.push(row);
        let decay = if f.is_zero() { None } else { Some(core(decay_bound(&p, f))?) };
        values.push(json!({
            "freq": f,
            "re": z.re,
            "im": z.im,
            "abs": abs,
            "decay_bound": decay,
        }));
    }
    Ok(Outcome {
        report: json!({
            "command": "ft",
            "probe": p,
            "prec": prec,
            "values": values,
        }),
        table: Some(table),
        certified_failure: false,
    })
}

fn default_n(c: &ExperimentConfig) -> u64 {
    c.n.unwrap_or(4096)
}

fn plancherel(c: &ExperimentConfig) -> Result<Outcome> {
    let p = probe(c)?;
    let radii = ExperimentConfig::rationals(&c.radii, "--R")?;
    let [r] = radii.as_slice() else {
        bail!("plancherel takes exactly one radius");
    };
    let rep = core(plancherel_probe(&p, r, default_n(c)))?;
    let failed = !rep.brackets;
    let mut report = to_json(&rep)?;
    report["command"] = json!("plancherel");
    Ok(Outcome { report, table: None, certified_failure: failed })
}

fn l2profile(c: &ExperimentConfig) -> Result<Outcome> {
    let p = probe(c)?;
    let radii = ExperimentConfig::rationals(&c.radii, "--R")?;
    let rep = core(improper_l2_profile(&p, &radii, default_n(c)))?;
    let mut table = Table::new(&["R", "integral_lo", "integral_hi", "tail_bound", "increment_lo", "increment_hi"]);
    for e in &rep.entries {
        let mut row = vec![s(&e.r)];
        row.extend(enc_pair(&e.integral));
        row.push(s(&e.tail_bound));
        row.extend(enc_pair(&e.increment));
        table.rows.push(row);
    }
    let failed = !rep.certified;
    let mut report = to_json(&rep)?;
    report["command"] = json!("l2profile");
    Ok(Outcome { report, table: Some(table), certified_failure: failed })
}

fn fourier_defect(c: &ExperimentConfig) -> Result<Outcome> {
    let p = probe(c)?;
    let radii = match &c.radii {
        Some(_) => ExperimentConfig::rationals(&c.radii, "--R")?,
        None => [8, 16, 32].map(Rational::integer).to_vec(),
    };
    let rep = core(riemann_defect_summary(&p, c.gap_depth.unwrap_or(DEFAULT_DEPTH), &radii, default_n(c)))?;
    let mut report = to_json(&rep)?;
    report["command"] = json!("fourier-defect");
    Ok(Outcome::ok(report))
}

fn term(c: &ExperimentConfig) -> Result<Outcome> {
    let kind = c.kind()?;
    let j = ExperimentConfig::need(&c.j, "--j")?;
    let t = core(kind.term(j))?;
    let mut report = json!({
        "command": "term",
        "kind": kind.to_string(),
        "j": j,
        "term": t,
    });
    if let Some(x) = &c.x {
        let x = x.parse()?;
        let v = core(t.eval(&Point::Rational(x.clone())))?;
        report["x"] = json!(x);
        report["value"] = to_json(&v)?;
    }
    Ok(Outcome::ok(report))
}
