//! Report post-processing: every exact `"p/q"` string gets a sibling decimal
//! rendering, flagged approximate by its key suffix.

use serde_json::{Map, Value};

use crate::exact::Rational;

/// Key suffix for decimal renderings.
pub const APPROX_SUFFIX: &str = "_approx";

fn is_fraction(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    match body.split_once('/') {
        Some((p, q)) => {
            !p.is_empty()
                && !q.is_empty()
                && p.bytes().all(|b| b.is_ascii_digit())
                && q.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

/// 12-significant-digit rendering of a `"p/q"` string, if it is one.
pub fn decimal_of(s: &str) -> Option<String> {
    if !is_fraction(s) {
        return None;
    }
    s.parse::<Rational>().ok().map(|r| r.to_decimal())
}

fn approx_of(v: &Value) -> Option<Value> {
    match v {
        Value::String(s) => decimal_of(s).map(Value::String),
        Value::Array(items) if !items.is_empty() => {
            let rendered: Option<Vec<Value>> = items.iter().map(approx_of).collect();
            rendered.map(Value::Array)
        }
        _ => None,
    }
}

/// Adds `<key>_approx` next to every field holding a rational (or an array
/// of rationals), recursively. Exact fields are left untouched.
pub fn annotate_decimals(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let mut out = Map::with_capacity(map.len());
            for (k, mut child) in std::mem::take(map) {
                let approx = approx_of(&child);
                annotate_decimals(&mut child);
                out.insert(k.clone(), child);
                if let Some(a) = approx {
                    out.insert(format!("{k}{APPROX_SUFFIX}"), a);
                }
            }
            *map = out;
        }
        Value::Array(items) => items.iter_mut().for_each(annotate_decimals),
        _ => {}
    }
}

/// Serializes `report` to pretty JSON with decimal annotations.
pub fn to_annotated_json<T: serde::Serialize>(report: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(report)?;
    annotate_decimals(&mut v);
    serde_json::to_string_pretty(&v)
}
