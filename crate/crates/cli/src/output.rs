//! Deterministic CSV and JSON writers.

use serde_json::{json, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits in the style of C's `%.12g`.
/// Negative zero prints as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        let raw = format!("{x:.decimals$}");
        let fixed = trim_zeros(&raw);
        if fixed == "-0" {
            "0".into()
        } else {
            fixed.to_string()
        }
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, with negative zero mapped to zero.
pub fn round_significant(x: f64) -> f64 {
    let r: f64 = format_number(x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A numeric table with named columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> =
            self.rows.iter().map(|r| Value::from(r.iter().map(|&v| round_significant(v)).collect::<Vec<_>>())).collect();
        let doc = json!({ "columns": self.columns, "rows": rows });
        pretty(&doc)
    }
}

/// A square complex matrix with row and column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    pub labels: Vec<String>,
    /// Row-major `(re, im)` entries.
    pub entries: Vec<Vec<(f64, f64)>>,
}

impl ComplexMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for (i, row) in self.entries.iter().enumerate() {
            for (j, &(re, im)) in row.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    self.labels[i],
                    self.labels[j],
                    format_number(re),
                    format_number(im)
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let matrix: Vec<Value> = self
            .entries
            .iter()
            .map(|row| {
                Value::from(
                    row.iter()
                        .map(|&(re, im)| json!({ "re": round_significant(re), "im": round_significant(im) }))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        pretty(&json!({ "basis": self.labels, "matrix": matrix }))
    }
}

fn pretty(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting_matches_percent_g() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (90.0, "90"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0f64.sqrt(), "1.41421356237"),
            (6.507602540378, "6.50760254038"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1e-300, "1e-300"),
            (-1e-20, "-1e-20"),
            (-1e-13, "-1e-13"),
        ];
        for (x, want) in cases {
            assert_eq!(format_number(x), want, "{x:e}");
        }
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_significant(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_significant(-0.0).to_bits(), 0.0f64.to_bits());
        for x in [std::f64::consts::PI, -1e-7 / 3.0, 6.02214076e23] {
            let r = round_significant(x);
            assert!(((r - x) / x).abs() < 1e-11);
            assert_eq!(round_significant(r), r);
        }
    }

    #[test]
    fn csv_and_json_layout() {
        let mut t = Table::new(&["theta_deg", "entropy_bits"]);
        t.push(vec![0.0, -0.0]);
        t.push(vec![90.0, 1.0 / 3.0]);
        assert_eq!(t.to_csv(), "theta_deg,entropy_bits\n0,0\n90,0.333333333333\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["columns"][1], "entropy_bits");
        assert_eq!(v["rows"][1][1].as_f64().unwrap(), 0.333333333333);

        let m = ComplexMatrix { labels: vec!["a".into(), "b".into()], entries: vec![vec![(1.0, 0.0), (0.0, -0.5)], vec![(0.0, 0.5), (0.0, 0.0)]] };
        assert_eq!(m.to_csv(), "row,col,re,im\na,a,1,0\na,b,0,-0.5\nb,a,0,0.5\nb,b,0,0\n");
        let v: Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["matrix"][0][1]["im"].as_f64().unwrap(), -0.5);
    }
}
