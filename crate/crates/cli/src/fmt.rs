//! Canonical number formatting and a small JSON/CSV writer on top of it.

use std::fmt::Write as _;
use std::io::Write;

use serde_json::Value;

/// Shortest `%.17g`-style rendering: 17 significant digits, trailing zeros
/// dropped, exponent form outside `[1e-4, 1e17)`. Parses back to the same `f64`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant), exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty JSON with every non-integer number in [`g17`] form.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                let _ = write!(out, "{n}");
            } else {
                out.push_str(&g17(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(item, depth + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

/// A cell of a CSV table.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => g17(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes rows of JSON objects as CSV with the given column order.
pub fn write_csv<W: Write>(sink: W, columns: &[&str], rows: &[Value]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(columns.iter().map(|c| cell(row.get(*c).unwrap_or(&Value::Null))))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes numeric columns directly, skipping the JSON detour for bulk data.
pub fn write_numeric_csv<W: Write>(sink: W, columns: &[&str], data: &[Vec<f64>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(columns)?;
    let len = data.first().map_or(0, Vec::len);
    for k in 0..len {
        w.write_record(data.iter().map(|col| g17(col[k])))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.372_281_323_269_014_3, -1e-7, 6.02e23, 123456.0, 5e-324, f64::MAX] {
            let s = g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(g17(2.0), "2");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(-2.5e-7), "-2.4999999999999999e-07");
        assert_eq!(g17(0.5e-6), "4.9999999999999998e-07");
        assert_eq!(g17(1e20), "1e+20");
        assert!(g17(3.9e-5).ends_with("e-05"));
        assert_eq!(g17(1e-4), "0.0001");
    }

    #[test]
    fn json_is_stable() {
        let v = serde_json::json!({"a": 0.1, "b": [1, 2.5], "c": {"d": null, "e": "x\"y"}});
        let text = to_json(&v);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert_eq!(to_json(&back), text);
    }
}
