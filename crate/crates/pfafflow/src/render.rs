//! JSON and table rendering. Rationals are `"p/q"` strings and polynomials
//! are term lists in graded-lexicographic order, so equal inputs give
//! byte-identical output.

use std::collections::BTreeMap;

use pfafflow_core::rational::format_q;
use pfafflow_core::{OddPoly, Q};
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Term {
    pub exponents: BTreeMap<String, u32>,
    pub coeff: String,
}

pub fn q_str(x: &Q) -> String {
    format_q(x)
}

pub fn poly_terms(p: &OddPoly) -> Vec<Term> {
    p.terms()
        .map(|(m, c)| Term {
            exponents: m
                .factors()
                .iter()
                .map(|(v, e)| (v.to_string(), *e))
                .collect(),
            coeff: q_str(c),
        })
        .collect()
}

pub fn render<T: Serialize>(value: &T, format: Format) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    match format {
        Format::Json => serde_json::to_string(&v).expect("values serialize"),
        Format::Table => table(&v),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_record_list(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object))
}

/// Column grid for a list of records; columns are the union of keys.
fn grid(rows: &[Value]) -> String {
    let mut cols: Vec<&String> = rows
        .iter()
        .filter_map(Value::as_object)
        .flat_map(|m| m.keys())
        .collect();
    cols.sort();
    cols.dedup();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            cols.iter()
                .map(|c| r.get(c.as_str()).map_or("-".into(), cell))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            body.iter()
                .map(|r| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(cols.iter().map(|c| c.as_str()).collect())];
    out.extend(
        body.iter()
            .map(|r| line(r.iter().map(String::as_str).collect())),
    );
    out.join("\n")
}

fn table(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let (lists, fields): (Vec<_>, Vec<_>) =
                map.iter().partition(|(_, x)| is_record_list(x));
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut parts: Vec<String> = fields
                .iter()
                .map(|(k, x)| format!("{k:<width$}  {}", cell(x)))
                .collect();
            for (k, x) in lists {
                parts.push(format!(
                    "\n{k}:\n{}",
                    grid(x.as_array().expect("record list"))
                ));
            }
            parts.join("\n")
        }
        Value::Array(rows) if is_record_list(v) => grid(rows),
        other => cell(other),
    }
}
