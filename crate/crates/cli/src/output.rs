//! Rendering of reports as CSV or JSON.

use mockcheb::bench::{ErrorReport, MethodParams, SweepResult};
use serde::Serialize;

use crate::CliError;

/// Header of sweep CSV files.
pub const SWEEP_HEADER: [&str; 7] = ["n", "method", "p", "param", "uniform_error", "two_norm_error", "flag"];

/// Scientific notation with 8 significant digits and an exponent of at
/// least two digits, e.g. `9.7493857e-09`. Non-finite values print as
/// `inf`, `-inf` or `nan`.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let s = format!("{v:.7e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn param_cell(params: &MethodParams) -> String {
    let mut parts = Vec::new();
    if let Some(e) = params.epsilon {
        parts.push(format!("epsilon={}", sci(e)));
    }
    if let Some(d) = params.d {
        parts.push(format!("d={d}"));
    }
    if let Some(g) = params.gamma {
        parts.push(format!("gamma={}", sci(g)));
    }
    parts.join(";")
}

fn row_cells(r: &ErrorReport) -> [String; 7] {
    [
        r.n.to_string(),
        r.method.to_string(),
        r.p.map(|p| p.to_string()).unwrap_or_default(),
        param_cell(&r.params),
        sci(r.uniform_error),
        r.two_norm_error.map(sci).unwrap_or_default(),
        r.flag.clone().unwrap_or_default(),
    ]
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = writer.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_csv(result: &SweepResult) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in &result.rows {
        w.write_record(row_cells(r))?;
    }
    finish(w)
}

/// Two-column `field,value` table.
pub fn fields_csv(fields: &[(String, String)]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"])?;
    for (k, v) in fields {
        w.write_record([k, v])?;
    }
    finish(w)
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
