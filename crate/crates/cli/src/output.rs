//! Byte-stable text output: JSON with 17 significant digits, CSV with 12.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const JSON_DIGITS: usize = 17;
pub const CSV_DIGITS: usize = 12;

/// C-style `%.{digits}g`: fixed notation for exponents in `[-5, digits)`, scientific
/// otherwise, trailing zeros removed.
pub fn format_g(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_g(n.as_f64().unwrap_or(f64::NAN), JSON_DIGITS));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Pretty JSON document with a trailing newline. Integer fields stay integers;
/// non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_c() {
        assert_eq!(format_g(1.5, 17), "1.5");
        assert_eq!(format_g(0.1, 17), "0.10000000000000001");
        assert_eq!(format_g(9.5, 12), "9.5");
        assert_eq!(format_g(-2.5e-7, 12), "-2.5e-7");
        assert_eq!(format_g(-2.5e-7, 17), "-2.4999999999999999e-7");
        assert_eq!(format_g(1e20, 17), "1e20");
        assert_eq!(format_g(123456.0, 12), "123456");
        assert_eq!(format_g(0.0, 12), "0");
        assert_eq!(format_g(-0.0, 12), "0");
        assert_eq!(format_g(2.0 / 3.0, 12), "0.666666666667");
    }

    #[test]
    fn round_trip_is_exact() {
        for v in [0.1, 1.0 / 3.0, 1.4998, 6.02e23, -1.2345678901234567e-9] {
            let s = format_g(v, JSON_DIGITS);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_layout() {
        let v = serde_json::json!({"a": 1, "b": [0.5, -0.25], "c": {"d": null}, "e": []});
        assert_eq!(
            to_json(&v).unwrap(),
            "{\n  \"a\": 1,\n  \"b\": [0.5, -0.25],\n  \"c\": {\n    \"d\": null\n  },\n  \"e\": []\n}\n"
        );
    }
}
