//! JSON algebra files: `{"name", "dim", "table", "unit"?}` with exact rational entries.

use serde_json::{json, Value};

use super::{validate, Algebra, StructureConstants, ValidationReport};
use crate::error::Error;
use crate::exact::rational::{format_rational, parse_rational, Rational};

/// A parsed but not yet validated algebra file.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub name: String,
    pub table: StructureConstants,
    pub unit: Option<Vec<Rational>>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("algebra file must be a JSON object".into()))?;
        let name = match obj.get("name") {
            None => "unnamed".to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::Parse("\"name\" must be a string".into())),
        };
        let table_v = obj
            .get("table")
            .ok_or_else(|| Error::Parse("missing \"table\"".into()))?;
        let nested = as_array(table_v, "table")?
            .iter()
            .enumerate()
            .map(|(i, plane)| {
                as_array(plane, &format!("table[{i}]"))?
                    .iter()
                    .enumerate()
                    .map(|(j, row)| {
                        as_array(row, &format!("table[{i}][{j}]"))?
                            .iter()
                            .map(rational_value)
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let table = StructureConstants::from_nested(nested)?;
        if let Some(d) = obj.get("dim") {
            let d = d
                .as_u64()
                .ok_or_else(|| Error::Parse("\"dim\" must be a positive integer".into()))?;
            if d as usize != table.dim() {
                return Err(Error::Shape(format!(
                    "\"dim\" is {d} but the table is {n}x{n}x{n}",
                    n = table.dim()
                )));
            }
        }
        let unit = match obj.get("unit") {
            None | Some(Value::Null) => None,
            Some(u) => {
                let u = as_array(u, "unit")?
                    .iter()
                    .map(rational_value)
                    .collect::<Result<Vec<_>, _>>()?;
                if u.len() != table.dim() {
                    return Err(Error::Shape(format!(
                        "\"unit\" has {} entries, expected {}",
                        u.len(),
                        table.dim()
                    )));
                }
                Some(u)
            }
        };
        Ok(AlgebraFile { name, table, unit })
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.table)
    }

    /// Validates and cross-checks the supplied unit, if any.
    pub fn into_algebra(self) -> Result<Algebra, Error> {
        match &self.unit {
            Some(u) => Algebra::with_unit(self.name, self.table, u),
            None => Algebra::new(self.name, self.table),
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<Algebra, Error> {
    AlgebraFile::parse(text)?.into_algebra()
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>, Error> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn rational_value(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s),
        // integers only: "1.0" and "1e3" are rejected by the exact parser
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

/// Serializes an algebra in the file format, every rational as a `"p/q"` string.
pub fn algebra_to_json(a: &Algebra) -> Value {
    let n = a.dim();
    let c = a.structure_constants();
    let table: Vec<Vec<Vec<String>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| format_rational(c.get(i, j, k))).collect())
                .collect()
        })
        .collect();
    let unit: Vec<String> = a.unit().iter().map(format_rational).collect();
    json!({
        "name": a.name(),
        "dim": n,
        "table": table,
        "unit": unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin::{builtin, CORPUS};

    #[test]
    fn round_trip() {
        for name in CORPUS {
            let a = builtin(name).unwrap();
            let text = algebra_to_json(&a).to_string();
            let b = parse_algebra(&text).unwrap();
            assert_eq!(b.structure_constants(), a.structure_constants());
            assert_eq!(b.unit(), a.unit());
            assert_eq!(b.name(), name);
        }
    }

    #[test]
    fn integers_and_strings_mix() {
        let text = r#"{"name":"r1","dim":1,"table":[[[1]]]}"#;
        assert_eq!(parse_algebra(text).unwrap().dim(), 1);
        let text = r#"{"name":"r1","dim":1,"table":[[["2/2"]]],"unit":["1"]}"#;
        assert_eq!(parse_algebra(text).unwrap().dim(), 1);
    }

    #[test]
    fn rejects_floats_and_bad_units() {
        let text = r#"{"name":"r1","dim":1,"table":[[[1.0]]]}"#;
        assert!(matches!(parse_algebra(text), Err(Error::Parse(_))));
        let text = r#"{"name":"r1","dim":1,"table":[[["0.5"]]]}"#;
        assert!(matches!(parse_algebra(text), Err(Error::Parse(_))));
        let text = r#"{"name":"r1","dim":1,"table":[[[1]]],"unit":["2"]}"#;
        assert!(matches!(parse_algebra(text), Err(Error::InvalidAlgebra(_))));
        let text = r#"{"name":"r1","dim":2,"table":[[[1]]]}"#;
        assert!(matches!(parse_algebra(text), Err(Error::Shape(_))));
        let text = r#"{"name":"z","dim":1,"table":[[[0]]]}"#;
        assert!(matches!(parse_algebra(text), Err(Error::NoUnit)));
    }
}
