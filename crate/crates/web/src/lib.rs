//! Browser demo. Each operation returns an annotated JSON string; the
//! `wasm32` build exports them through wasm-bindgen.

use serde_json::json;

use darboux_core::convergence::{limit_note, pointwise_profile};
use darboux_core::counterexamples::{FatCoverConfig, SequenceKind};
use darboux_core::darboux::{darboux_sums, FunctionDescriptor, Partition};
use darboux_core::exact::Rational;
use darboux_core::fourier::{transform_value, TransformProbe};
use darboux_core::report::to_annotated_json;

/// Witness rows shown per request; the sums themselves cover every cell.
const MAX_WITNESSES: usize = 64;
const MAX_CELLS: u64 = 4096;
const MAX_JMAX: u64 = 1 << 16;
const MAX_FREQS: usize = 256;

fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|e| format!("{e}"))
}

fn fat_cover(ell: &str) -> Result<FatCoverConfig, String> {
    FatCoverConfig::new(rational(ell)?).map_err(|e| e.to_string())
}

fn render(v: &serde_json::Value) -> Result<String, String> {
    to_annotated_json(v).map_err(|e| e.to_string())
}

/// Upper/lower Darboux sums of the fat-cover indicator on `uniform:n`
/// (or `random:n` when `seed` is given).
pub fn fat_darboux(ell: &str, cells: u64, seed: Option<u64>, depth: u64) -> Result<String, String> {
    if cells == 0 || cells > MAX_CELLS {
        return Err(format!("cells must be in 1..={MAX_CELLS}"));
    }
    let p = match seed {
        Some(s) => Partition::random(cells, s),
        None => Partition::uniform(cells),
    }
    .map_err(|e| e.to_string())?;
    let d = FunctionDescriptor::FatCoverIndicator { ell: fat_cover(ell)? };
    let mut r = darboux_sums(&d, &p, depth).map_err(|e| e.to_string())?;
    let gap = r.gap();
    let total = r.witnesses.len();
    r.witnesses.truncate(MAX_WITNESSES);
    render(&json!({
        "upper_sum": r.upper_sum,
        "lower_sum": r.lower_sum,
        "gap": gap,
        "cells": r.cells,
        "unresolved_cells": r.unresolved_cells,
        "witnesses_total": total,
        "witnesses": r.witnesses,
    }))
}

/// Typewriter values at `x` for `j = 1..=jmax` with the oscillation verdict.
pub fn typewriter_profile(x: &str, jmax: u64) -> Result<String, String> {
    if jmax > MAX_JMAX {
        return Err(format!("jmax must be <= {MAX_JMAX}"));
    }
    let v = pointwise_profile(&SequenceKind::Typewriter, &rational(x)?, jmax).map_err(|e| e.to_string())?;
    render(&json!({
        "mode": v.mode,
        "certified": v.certified,
        "witness": v.witness,
        "trace": v.trace,
        "note": limit_note(&SequenceKind::Typewriter),
    }))
}

/// Certified enclosures of `|F_k(ξ)|²` for comma-separated frequencies.
pub fn transform_power(ell: &str, k: u64, freqs: &str, prec: u32) -> Result<String, String> {
    let probe = TransformProbe::fat_cover(fat_cover(ell)?, k).map_err(|e| e.to_string())?;
    let freqs = freqs
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(rational)
        .collect::<Result<Vec<_>, _>>()?;
    if freqs.len() > MAX_FREQS {
        return Err(format!("at most {MAX_FREQS} frequencies"));
    }
    let rows = freqs
        .iter()
        .map(|f| {
            let z = transform_value(&probe, f, prec).map_err(|e| e.to_string())?;
            Ok(json!({"freq": f, "power": z.norm_sq()}))
        })
        .collect::<Result<Vec<_>, String>>()?;
    render(&json!({
        "k": k,
        "measure": probe.indicator_set().map_err(|e| e.to_string())?.measure(),
        "values": rows,
    }))
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn js(r: Result<String, String>) -> Result<String, JsError> {
        r.map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = fatDarboux)]
    pub fn fat_darboux(ell: &str, cells: u32, seed: Option<u32>, depth: u32) -> Result<String, JsError> {
        js(super::fat_darboux(ell, cells.into(), seed.map(u64::from), depth.into()))
    }

    #[wasm_bindgen(js_name = typewriterProfile)]
    pub fn typewriter_profile(x: &str, jmax: u32) -> Result<String, JsError> {
        js(super::typewriter_profile(x, jmax.into()))
    }

    #[wasm_bindgen(js_name = transformPower)]
    pub fn transform_power(ell: &str, k: u32, freqs: &str, prec: u32) -> Result<String, JsError> {
        js(super::transform_power(ell, k.into(), freqs, prec))
    }
}
