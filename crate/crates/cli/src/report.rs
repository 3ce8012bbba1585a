//! JSON encoding for reports: exact values as `"p/q"` strings, floats with 17
//! significant digits, matrices row-major.

use std::str::FromStr;

use serde_json::{Map, Number, Value};
use uncurl_core::exact::{format_rational, MultiPoly, Rational, RationalMatrix};
use uncurl_core::uncurl::{InvariantReport, SymMetric};

pub const SCHEMA: &str = "uncurl-report/1";

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().copied().map(float).collect())
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn matrix(m: &RationalMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| rationals(r)).collect())
}

pub fn metric(l: &SymMetric) -> Value {
    matrix(l.matrix())
}

pub fn poly(p: &MultiPoly) -> Value {
    Value::String(p.to_string())
}

pub fn invariants(r: &InvariantReport) -> Value {
    let samples: Vec<Value> = r
        .signature_samples
        .iter()
        .map(|s| {
            let mut m = Map::new();
            m.insert(
                "direction".into(),
                s.direction.map_or(Value::Null, Value::from),
            );
            m.insert("step".into(), s.step.into());
            m.insert("signature".into(), s.signature.as_triple().to_vec().into());
            Value::Object(m)
        })
        .collect();
    let multiset: Vec<Value> = r
        .signature_multiset()
        .iter()
        .map(|s| s.as_triple().to_vec().into())
        .collect();
    let scale = match &r.direction_scale {
        None => Value::Null,
        Some(uncurl_core::uncurl::DirectionScale::Intrinsic(q)) => {
            let mut m = Map::new();
            m.insert("kind".into(), "intrinsic".into());
            m.insert("q".into(), rational(q));
            Value::Object(m)
        }
        Some(uncurl_core::uncurl::DirectionScale::ScaleFree) => {
            let mut m = Map::new();
            m.insert("kind".into(), "scale_free".into());
            Value::Object(m)
        }
    };
    let mut m = Map::new();
    m.insert("dim".into(), r.dim.into());
    m.insert("unit_norm_squared".into(), r.unit_norm_squared.into());
    m.insert("dim_uncurling".into(), r.dim_uncurling.into());
    m.insert(
        "dim_normalized_family".into(),
        r.dim_normalized_family.into(),
    );
    m.insert("signature_samples".into(), Value::Array(samples));
    m.insert("signature_multiset".into(), Value::Array(multiset));
    m.insert("direction_scale".into(), scale);
    m.insert(
        "admits_positive_definite_normalized".into(),
        r.admits_positive_definite_normalized.to_string().into(),
    );
    Value::Object(m)
}

/// Indented `key: value` rendering for terminals.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn write_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
