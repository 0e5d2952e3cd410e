//! Byte-stable CSV and JSON emission.

use std::fmt::Write as _;

/// Significant digits written for every float; enough to round-trip `f64`.
pub const SIGNIFICANT_DIGITS: usize = 17;

/// Formats `x` with 17 significant digits: fixed notation for decimal
/// exponents in `[-5, 17)`, scientific otherwise. `-0` prints as `0`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        format!("{:.*}", (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize, x)
    } else {
        sci
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl Value {
    pub fn opt(x: Option<f64>) -> Value {
        x.map_or(Value::Null, Value::Float)
    }

    fn csv(&self) -> String {
        match self {
            Value::Float(x) => format_f64(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Float(x) if x.is_finite() => format_f64(*x),
            Value::Float(_) | Value::Null => "null".into(),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as u64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

/// A header plus rows of equal width.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"config": {...}, "rows": [{...}, ...]}` with keys in header order.
    pub fn to_json(&self, config: &[(&'static str, Value)]) -> String {
        let mut out = String::from("{\"config\":");
        write_object(&mut out, config.iter().map(|(k, v)| (*k, v)));
        out.push_str(",\"rows\":[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_object(&mut out, self.columns.iter().copied().zip(row));
        }
        out.push_str("]}\n");
        out
    }
}

fn write_object<'a>(out: &mut String, pairs: impl Iterator<Item = (&'a str, &'a Value)>) {
    out.push('{');
    for (i, (k, v)) in pairs.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:{}", serde_json::to_string(k).expect("keys serialize"), v.json());
    }
    out.push('}');
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_and_scientific() {
        assert_eq!(format_f64(1.0), "1.0000000000000000");
        assert_eq!(format_f64(0.0), "0.0000000000000000");
        assert_eq!(format_f64(-0.0), "0.0000000000000000");
        assert_eq!(format_f64(0.2), "0.20000000000000001");
        assert_eq!(format_f64(4.5323601418271942), "4.5323601418271942");
        assert_eq!(format_f64(123456.0), "123456.00000000000");
        assert_eq!(format_f64(1e-6), "9.9999999999999995e-7");
        assert_eq!(format_f64(1e20), "1.0000000000000000e20");
        assert_eq!(format_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_that_bumps_the_exponent() {
        assert_eq!(format_f64(9.99999999999999999), "10.000000000000000");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Value::Int(1), Value::Null, Value::Bool(false)]);
        assert_eq!(t.to_csv(), "a,b,c\n1,,false\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["x", "ok"]);
        t.push(vec![Value::Float(0.5), Value::Bool(true)]);
        t.push(vec![Value::Null, Value::Bool(false)]);
        let cfg = [("mode", Value::from("sweep")), ("fmax", Value::Float(f64::INFINITY))];
        let s = t.to_json(&cfg);
        assert_eq!(
            s,
            "{\"config\":{\"mode\":\"sweep\",\"fmax\":null},\"rows\":[{\"x\":0.50000000000000000,\"ok\":true},{\"x\":null,\"ok\":false}]}\n"
        );
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["rows"][0]["x"], 0.5);
    }

    proptest! {
        #[test]
        fn round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = format_f64(x);
            let back: f64 = s.parse().unwrap();
            prop_assert!(back == x || (x == 0.0 && back == 0.0));
        }
    }
}
