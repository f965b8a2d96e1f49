//! Report emission. CSV rows under a fixed header, decay-fit summary lines
//! as trailing comments; JSON with the same fields plus the config echo and
//! library version. Floats are printed with 17 significant digits so parsing
//! them back reproduces the exact bit pattern.

use crate::runner::{FitRow, ReportRow, RunOutput};
use std::fmt::Write as _;

pub const CSV_HEADER: &str = "model,n,p,beta,k,gap,se,bound,delta,satisfied";

/// 17 significant digits, scientific; round-trip exact for f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_optional_float(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format_float(v),
        _ => String::new(),
    }
}

/// Integer-valued parameters print as integers, fractional ones as floats.
fn format_param(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15 => {
            format!("{}", v as i64)
        }
        other => format_optional_float(other),
    }
}

fn csv_row(row: &ReportRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        row.model,
        row.n,
        format_param(row.p),
        format_param(row.beta),
        row.k,
        format_float(row.gap),
        format_optional_float(row.se),
        format_optional_float(row.bound),
        format_optional_float(row.delta),
        row.satisfied.map(|s| s.to_string()).unwrap_or_default(),
    )
}

fn fit_comment(fit: &FitRow) -> String {
    format!(
        "# decay model={} k={} x={} slope={} intercept={} r2={} points={} dropped={}",
        fit.model,
        fit.k,
        fit.x_label,
        format_float(fit.slope),
        format_float(fit.intercept),
        format_float(fit.r_squared),
        fit.points,
        fit.dropped,
    )
}

pub fn to_csv(output: &RunOutput) -> String {
    let mut text = String::new();
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in &output.rows {
        text.push_str(&csv_row(row));
        text.push('\n');
    }
    for fit in &output.fits {
        text.push_str(&fit_comment(fit));
        text.push('\n');
    }
    text
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn json_optional_float(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format_float(v),
        _ => "null".into(),
    }
}

pub fn to_json(output: &RunOutput, id: &str, seed: u64, config_text: &str) -> String {
    let mut text = String::new();
    let _ = write!(
        text,
        "{{\"library_version\":\"{}\",\"id\":\"{}\",\"seed\":{},\"rows\":[",
        momentgap::VERSION,
        json_escape(id),
        seed
    );
    for (i, row) in output.rows.iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        let _ = write!(
            text,
            "{{\"model\":\"{}\",\"n\":{},\"p\":{},\"beta\":{},\"k\":{},\"gap\":{},\"se\":{},\"bound\":{},\"delta\":{},\"satisfied\":{}}}",
            json_escape(&row.model),
            row.n,
            json_optional_float(row.p),
            json_optional_float(row.beta),
            row.k,
            format_float(row.gap),
            json_optional_float(row.se),
            json_optional_float(row.bound),
            json_optional_float(row.delta),
            row.satisfied.map(|s| s.to_string()).unwrap_or_else(|| "null".into()),
        );
    }
    text.push_str("],\"decay_fits\":[");
    for (i, fit) in output.fits.iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        let _ = write!(
            text,
            "{{\"model\":\"{}\",\"k\":{},\"x\":\"{}\",\"slope\":{},\"intercept\":{},\"r_squared\":{},\"points\":{},\"dropped\":{}}}",
            json_escape(&fit.model),
            fit.k,
            fit.x_label,
            format_float(fit.slope),
            format_float(fit.intercept),
            format_float(fit.r_squared),
            fit.points,
            fit.dropped,
        );
    }
    text.push_str("],\"errors\":[");
    for (i, err) in output.errors.iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        let _ = write!(
            text,
            "{{\"model\":\"{}\",\"n\":{},\"message\":\"{}\"}}",
            json_escape(&err.model),
            err.n,
            json_escape(&err.message),
        );
    }
    let _ = write!(text, "],\"config\":\"{}\"}}", json_escape(config_text));
    text.push('\n');
    text
}
