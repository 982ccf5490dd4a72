use std::io::Write;

use anyhow::{Context, Result};
use serde_json::Value as Json;

use darboux_core::report::{annotate_decimals, decimal_of, APPROX_SUFFIX};

use crate::config::{ExperimentConfig, Format};
use crate::run::{Outcome, Table};

pub fn render(format: Format, o: &Outcome) -> Result<String> {
    match format {
        Format::Json => {
            let mut v = o.report.clone();
            annotate_decimals(&mut v);
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match &o.table {
            Some(t) => table_csv(t),
            None => table_csv(&flatten(&o.report)),
        },
    }
}

pub fn emit(c: &ExperimentConfig, o: &Outcome) -> Result<()> {
    let text = render(c.format(), o)?;
    match &c.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Every column made of rationals gets a decimal twin right after it.
fn table_csv(t: &Table) -> Result<String> {
    let rational_col: Vec<bool> = (0..t.headers.len())
        .map(|i| {
            let mut cells = t.rows.iter().map(|r| r[i].as_str()).filter(|s| !s.is_empty()).peekable();
            cells.peek().is_some() && cells.all(|s| decimal_of(s).is_some())
        })
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = Vec::new();
    for (h, &rat) in t.headers.iter().zip(&rational_col) {
        header.push(h.clone());
        if rat {
            header.push(format!("{h}{APPROX_SUFFIX}"));
        }
    }
    w.write_record(&header)?;
    for row in &t.rows {
        let mut rec = Vec::new();
        for (cell, &rat) in row.iter().zip(&rational_col) {
            rec.push(cell.clone());
            if rat {
                rec.push(decimal_of(cell).unwrap_or_default());
            }
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?)
}

/// `field, value, approx` rows with dotted paths, for reports without a table.
fn flatten(v: &Json) -> Table {
    fn walk(prefix: &str, v: &Json, out: &mut Vec<Vec<String>>) {
        match v {
            Json::Object(m) => {
                for (k, child) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, child, out);
                }
            }
            Json::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), child, out);
                }
            }
            Json::String(s) => out.push(vec![prefix.to_string(), s.clone(), decimal_of(s).unwrap_or_default()]),
            Json::Null => out.push(vec![prefix.to_string(), String::new(), String::new()]),
            other => out.push(vec![prefix.to_string(), other.to_string(), String::new()]),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    Table {
        headers: vec!["field".into(), "value".into(), "approx".into()],
        rows,
    }
}
