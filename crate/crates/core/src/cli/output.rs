//! Table emission: CSV with a `# key=value` metadata preamble, or JSON with
//! `meta` and `points`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetaValue {
    Text(String),
    Int(u64),
    Real(f64),
    Bool(bool),
}

impl MetaValue {
    fn csv_text(&self) -> String {
        match self {
            MetaValue::Text(s) => s.clone(),
            MetaValue::Int(n) => n.to_string(),
            // Shortest round-trip representation.
            MetaValue::Real(x) => format!("{x}"),
            MetaValue::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            MetaValue::Text(s) => json!(s),
            MetaValue::Int(n) => json!(n),
            MetaValue::Real(x) if x.is_finite() => json!(x),
            MetaValue::Real(x) => json!(x.to_string()),
            MetaValue::Bool(b) => json!(b),
        }
    }
}

impl From<&str> for MetaValue {
    fn from(s: &str) -> Self {
        MetaValue::Text(s.to_owned())
    }
}
impl From<String> for MetaValue {
    fn from(s: String) -> Self {
        MetaValue::Text(s)
    }
}
impl From<u64> for MetaValue {
    fn from(n: u64) -> Self {
        MetaValue::Int(n)
    }
}
impl From<f64> for MetaValue {
    fn from(x: f64) -> Self {
        MetaValue::Real(x)
    }
}
impl From<bool> for MetaValue {
    fn from(b: bool) -> Self {
        MetaValue::Bool(b)
    }
}

/// One output row. `x` is in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub y: f64,
    pub std_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub meta: Vec<(String, MetaValue)>,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn push_meta(&mut self, key: &str, value: impl Into<MetaValue>) {
        self.meta.push((key.to_owned(), value.into()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&MetaValue> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// `%.{sig}g`-style formatting: `sig` significant digits, trailing zeros
/// dropped, exponent notation outside `1e-4 ≤ |v| < 10^sig`.
pub fn format_significant(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Degrees with six decimals.
pub fn format_angle(deg: f64) -> String {
    let s = format!("{deg:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

pub fn render(report: &Report, format: Format) -> Result<Vec<u8>> {
    if report.rows.is_empty() {
        return Err(Error::InvalidArgument("refusing to emit an empty table".into()));
    }
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in &report.meta {
                out.push_str(&format!("# {k}={}\n", v.csv_text()));
            }
            out.push_str("x,y,stderr\n");
            for r in &report.rows {
                let se = r.std_err.map(|s| format_significant(s, 12)).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{}\n",
                    format_angle(r.x),
                    format_significant(r.y, 12),
                    se
                ));
            }
            Ok(out.into_bytes())
        }
        Format::Json => {
            let meta: Map<String, Value> = report
                .meta
                .iter()
                .map(|(k, v)| (k.clone(), v.json()))
                .collect();
            let points: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({ "x": r.x, "y": r.y, "stderr": r.std_err }))
                .collect();
            let mut bytes = serde_json::to_vec_pretty(&json!({ "meta": meta, "points": points }))
                .map_err(|e| Error::Consistency(format!("json encoding: {e}")))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Writes the rendered table to `destination`, or stdout when `None`.
/// Returns the number of bytes written.
pub fn emit_table(report: &Report, format: Format, destination: Option<&Path>) -> io::Result<usize> {
    let bytes = render(report, format).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    match destination {
        Some(path) => fs::write(path, &bytes)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(bytes.len())
}

/// Metadata pairs and data rows recovered from an emitted CSV.
pub type ParsedCsv = (Vec<(String, String)>, Vec<Row>);

/// Parses CSV emitted by [`render`].
pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let bad = |msg: String| Error::InvalidArgument(format!("csv: {msg}"));
    let mut meta = Vec::new();
    let mut rows = Vec::new();
    let mut header_seen = false;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| bad(format!("bad metadata line {line:?}")))?;
            meta.push((k.to_owned(), v.to_owned()));
        } else if !header_seen {
            if line != "x,y,stderr" {
                return Err(bad(format!("unexpected header {line:?}")));
            }
            header_seen = true;
        } else {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(bad(format!("expected 3 fields in {line:?}")));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
            rows.push(Row {
                x: num(fields[0])?,
                y: num(fields[1])?,
                std_err: if fields[2].is_empty() { None } else { Some(num(fields[2])?) },
            });
        }
    }
    if !header_seen {
        return Err(bad("missing header".into()));
    }
    Ok((meta, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.1875, 12), "0.1875");
        assert_eq!(format_significant(0.0625, 12), "0.0625");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(-2.0 * 2f64.sqrt(), 12), "-2.82842712475");
        assert_eq!(format_significant(0.25, 12), "0.25");
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(3.2e-7, 12), "3.2e-07");
        assert_eq!(format_significant(0.00322222, 12), "0.00322222");
        assert_eq!(format_significant(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_significant(9.9999999999999, 12), "10");
    }

    #[test]
    fn analytic_row_format() {
        let report = Report {
            meta: vec![],
            rows: vec![Row { x: 180.0, y: 0.1875, std_err: None }],
        };
        let text = String::from_utf8(render(&report, Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "x,y,stderr\n180.000000,0.1875,\n");
    }

    #[test]
    fn empty_rejected() {
        assert!(render(&Report::default(), Format::Csv).is_err());
        assert!(render(&Report::default(), Format::Json).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut report = Report::default();
        report.push_meta("model", "entangled");
        report.push_meta("s", -2.8284271247461903);
        report.rows = (0..10)
            .map(|i| Row { x: i as f64 * 36.0, y: (i as f64).sin() / 7.0, std_err: Some(1e-3 * i as f64) })
            .collect();
        let text = String::from_utf8(render(&report, Format::Csv).unwrap()).unwrap();
        let (meta, rows) = parse_csv(&text).unwrap();
        assert_eq!(meta[1], ("s".to_owned(), "-2.8284271247461903".to_owned()));
        for (a, b) in report.rows.iter().zip(&rows) {
            assert!((a.x - b.x).abs() < 1e-6);
            assert!((a.y - b.y).abs() <= 1e-10 * a.y.abs().max(1e-300));
        }
    }

    #[test]
    fn json_shape() {
        let mut report = Report::default();
        report.push_meta("S", -2.5);
        report.rows.push(Row { x: 0.0, y: -1.0, std_err: None });
        let v: Value = serde_json::from_slice(&render(&report, Format::Json).unwrap()).unwrap();
        assert_eq!(v["meta"]["S"], json!(-2.5));
        assert_eq!(v["points"][0]["stderr"], Value::Null);
    }
}
