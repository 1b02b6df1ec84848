//! Deterministic JSON layout.
//!
//! Containers holding only scalars (or arrays of scalars) go on one line;
//! everything else is indented by two spaces. Key order is the insertion
//! order of the value.

use serde_json::{Number, Value};

/// How floating-point numbers are written.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloatStyle {
    /// Shortest representation that parses back to the same `f64`.
    Shortest,
    /// 17 significant digits in scientific notation.
    Significant17,
}

pub fn to_string(value: &Value, style: FloatStyle) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0, style);
    out.push('\n');
    out
}

fn is_leaf(value: &Value) -> bool {
    match value {
        Value::Array(items) => items.iter().all(|v| !matches!(v, Value::Array(_) | Value::Object(_))),
        Value::Object(map) => map.values().all(|v| match v {
            Value::Array(_) => is_leaf(v),
            Value::Object(_) => false,
            _ => true,
        }),
        _ => true,
    }
}

fn write_value(out: &mut String, value: &Value, indent: usize, style: FloatStyle) {
    if is_leaf(value) {
        write_inline(out, value, style);
        return;
    }
    let pad = "  ".repeat(indent + 1);
    match value {
        Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                out.push_str(&pad);
                write_value(out, v, indent + 1, style);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, indent + 1, style);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => unreachable!("scalars are leaves"),
    }
}

fn write_inline(out: &mut String, value: &Value, style: FloatStyle) {
    match value {
        Value::Number(n) => out.push_str(&format_number(n, style)),
        Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(out, v, style);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_inline(out, v, style);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn format_number(n: &Number, style: FloatStyle) -> String {
    match (n.as_f64(), n.is_f64(), style) {
        (Some(x), true, FloatStyle::Significant17) => format!("{x:.16e}"),
        _ => n.to_string(),
    }
}
