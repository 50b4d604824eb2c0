//! Plain-text rendering of JSON reports.

use serde_json::Value;

/// Rounds to 12 significant digits.
pub fn number(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::from("-")),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(f) if !n.is_u64() && !n.is_i64() => number(f),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(scalar)
            .collect::<Option<Vec<_>>>()
            .filter(|_| items.iter().all(|i| !i.is_object()))
            .map(|parts| format!("[{}]", parts.join(", "))),
        Value::Object(_) => None,
    }
}

fn write(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write(out, item, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{i}]\n"));
                        write(out, item, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write(&mut out, v, 0);
    out.trim_end().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(number(0.1 + 0.2), "0.3");
        assert_eq!(number(2.0 / 3.0), "0.666666666667");
        assert_eq!(number(1.5e-13), "1.5e-13");
        assert_eq!(number(0.0), "0");
    }

    #[test]
    fn nested() {
        let v: Value =
            serde_json::from_str(r#"{"a": 1.0, "b": {"c": [0.5, true]}, "d": [{"e": 2}]}"#)
                .unwrap();
        assert_eq!(
            text(&v),
            "a: 1\nb:\n  c: [0.5, true]\nd:\n  - [0]\n    e: 2"
        );
    }
}
