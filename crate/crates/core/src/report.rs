//! CSV and JSON rendering of [`McReport`] rows.
//!
//! Both formats print floats with the same shortest round-trip text, so a
//! CSV cell and the matching JSON number are character-identical.

use std::fmt::Write as _;

use crate::error::{EntropyError, Result};
use crate::monte_carlo::McReport;

pub const CSV_COLUMNS: [&str; 13] = [
    "kind", "n", "m", "w", "alpha", "replicates", "seed", "value", "std_error", "bias", "sd", "rmse", "power",
];

/// Shortest round-trip decimal text of a float; non-finite values become
/// `NaN`, `inf` or `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(r: &McReport) -> String {
    [
        csv_field(&r.kind),
        r.n.to_string(),
        r.m.to_string(),
        r.w.to_string(),
        opt(r.alpha),
        r.replicates.to_string(),
        r.seed.to_string(),
        format_float(r.value),
        format_float(r.std_error),
        opt(r.bias),
        opt(r.sd),
        opt(r.rmse),
        opt(r.power),
    ]
    .join(",")
}

pub fn to_csv(reports: &[McReport]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in reports {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

/// JSON array of report objects using the CSV column names as keys.
pub fn to_json(reports: &[McReport]) -> Result<String> {
    if let Some(r) = reports.iter().find(|r| {
        !r.value.is_finite()
            || !r.std_error.is_finite()
            || [r.alpha, r.bias, r.sd, r.rmse, r.power].iter().flatten().any(|v| !v.is_finite())
    }) {
        return Err(EntropyError::domain(format!("report '{}' holds a non-finite value", r.kind)));
    }
    let mut out = serde_json::to_string_pretty(reports).map_err(|e| EntropyError::domain(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

/// `# key=value ...` header echoing the run configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunHeader {
    fields: Vec<(String, String)>,
}

impl RunHeader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut s = String::from("#");
        for (k, v) in &self.fields {
            let _ = write!(s, " {k}={v}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> McReport {
        let mut r = McReport::point("hw_r", 20, 3, 3, 7, 0.1 + 0.2);
        r.rmse = Some(1e-7);
        r
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&[report()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.next().unwrap(), "hw_r,20,3,3,,0,7,0.30000000000000004,0.0,,,1e-7,");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }

    #[test]
    fn json_round_trip_matches_csv_text() {
        let json = to_json(&[report()]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = &v[0];
        for col in CSV_COLUMNS {
            assert!(obj.get(col).is_some(), "{col}");
        }
        assert_eq!(obj["value"].as_f64().unwrap(), 0.1 + 0.2);
        assert!(json.contains("0.30000000000000004"));
        assert!(obj["bias"].is_null());
        let mut bad = report();
        bad.value = f64::INFINITY;
        assert!(to_json(&[bad]).is_err());
    }

    #[test]
    fn header() {
        let h = RunHeader::new().field("seed", 7).field("n", 20).field("mode", "full");
        assert_eq!(h.line(), "# seed=7 n=20 mode=full");
    }
}
