//! Structured output and the tabular view derived from it.

use std::fmt::Write;

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            table(value, "", &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

/// Scalars as `key  value` lines; arrays of objects as aligned rows.
fn table(value: &Value, prefix: &str, out: &mut String) {
    let Value::Object(map) = value else {
        let _ = writeln!(out, "{}", scalar(value));
        return;
    };
    let is_nested = |v: &Value| v.is_object() || matches!(v, Value::Array(items) if items.iter().any(Value::is_object));
    let width = map
        .iter()
        .filter(|(_, v)| !is_nested(v))
        .map(|(k, _)| prefix.len() + k.len())
        .max()
        .unwrap_or(0);
    let mut nested = Vec::new();
    for (key, v) in map {
        let name = format!("{prefix}{key}");
        if is_nested(v) {
            nested.push((name, v));
            continue;
        }
        let text = scalar(v);
        if text.contains('\n') {
            let _ = writeln!(out, "{name}:");
            for line in text.lines() {
                let _ = writeln!(out, "  {line}");
            }
        } else {
            let _ = writeln!(out, "{name:width$}  {text}");
        }
    }
    for (name, v) in nested {
        match v {
            Value::Array(items) => rows(&name, items, out),
            _ => table(v, &format!("{name}."), out),
        }
    }
}

fn rows(name: &str, items: &[Value], out: &mut String) {
    let mut columns: Vec<String> = Vec::new();
    for item in items {
        if let Value::Object(m) = item {
            for k in m.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| columns.iter().map(|c| item.get(c).map_or_else(String::new, scalar)).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let _ = writeln!(out, "\n[{name}]");
    let line = |vals: &[String]| {
        vals.iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(&columns));
    for r in &cells {
        let _ = writeln!(out, "{}", line(r));
    }
}
