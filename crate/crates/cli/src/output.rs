use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Serialize)]
pub struct Meta {
    pub tool_version: &'static str,
    pub lie_type: Option<String>,
    pub level: Option<i64>,
    pub seed: u64,
}

impl Meta {
    pub fn new(cfg: &RunConfig) -> Self {
        Meta {
            tool_version: env!("CARGO_PKG_VERSION"),
            lie_type: cfg.lie_type.map(|t| t.to_string()),
            level: cfg.k.or(cfg.level),
            seed: cfg.seed,
        }
    }
}

/// Command output: the JSON result plus a flat table for CSV.
pub struct Output {
    pub result: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn new(result: Value) -> Self {
        Output {
            result,
            header: vec![],
            rows: vec![],
        }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }
}

pub fn weight_str(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(" ")
}

pub fn render(cfg: &RunConfig, out: &Output) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => {
            let doc = json!({ "meta": Meta::new(cfg), "result": out.result });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            let io = |e: csv::Error| CliError::Internal(e.to_string());
            if !out.header.is_empty() {
                w.write_record(&out.header).map_err(io)?;
            }
            for r in &out.rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
        }
        Format::Pretty => {
            let mut s = String::new();
            pretty(&out.result, 0, &mut s);
            Ok(s)
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(is_scalar) => {
            let parts: Vec<String> = a.iter().filter_map(inline).collect();
            Some(format!("({})", parts.join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Array(_)) && inline(x).is_some()) && a.len() <= 12 => {
            let parts: Vec<String> = a.iter().filter_map(inline).collect();
            Some(format!("[{}]", parts.join(" ")))
        }
        Value::Object(m) if m.len() <= 4 && m.values().all(|x| inline(x).is_some()) => {
            let parts: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{k}={}", inline(x).unwrap()))
                .collect();
            Some(parts.join("  "))
        }
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn pretty(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        pretty(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}
