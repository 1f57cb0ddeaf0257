use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, CliResult};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// `v` rounded to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// Shortest decimal form of `v` at 12 significant digits.
pub fn fmt12(v: f64) -> String {
    let r = round12(v);
    if r == 0.0 {
        // Avoids printing "-0".
        "0".to_string()
    } else if r.abs() < 1e-4 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round12(n.as_f64().unwrap_or_default());
            *v = serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r })
                .map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_rounded_value<T: Serialize>(value: &T) -> CliResult<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))?;
    round_value(&mut v);
    Ok(v)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(scalar)
            .collect::<Option<Vec<_>>>()
            .map(|parts| format!("[{}]", parts.join(", "))),
        Value::Object(_) => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) if !matches!(item, Value::Array(a) if a.len() > 4) => {
                        out.push_str(&format!("{pad}{k}: {s}\n"))
                    }
                    _ => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(item, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render_text(item, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn render<T: Serialize>(format: Format, value: &T) -> CliResult<String> {
    let v = to_rounded_value(value)?;
    Ok(match format {
        Format::Json => format!("{v}\n"),
        Format::Text => {
            let mut s = String::new();
            render_text(&v, 0, &mut s);
            s
        }
    })
}

pub fn emit<T: Serialize>(format: Format, value: &T) -> CliResult<()> {
    let text = render(format, value)?;
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(format!("writing output: {e}")))
}
