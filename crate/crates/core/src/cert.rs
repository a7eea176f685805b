//! Named checks and the reports that collect them.

use crate::exactcore::poly::QPoly;
use crate::exactcore::rational::{rat_to_string, Rational};
use crate::interval::{decimal_string, CBox, Interval, Round};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A statement of the underlying theory, instantiated.
    Claim,
    /// A value worked out by hand from the definitions.
    Derived,
    /// Evidence from seeded sampling or a probabilistic test.
    Sampled,
    /// A documented computational stand-in for a non-effective object.
    Substitution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub provenance: Provenance,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Certificate {
    pub fn new(
        name: impl Into<String>,
        expected: Value,
        actual: Value,
        provenance: Provenance,
        pass: bool,
    ) -> Self {
        Certificate {
            name: name.into(),
            expected,
            actual,
            provenance,
            pass,
            note: None,
        }
    }

    /// Check that `actual == expected` after serialization.
    pub fn equal(name: impl Into<String>, expected: Value, actual: Value, provenance: Provenance) -> Self {
        let pass = expected == actual;
        Certificate::new(name, expected, actual, provenance, pass)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub fn rat_json(q: &Rational) -> Value {
    Value::String(rat_to_string(q))
}

/// `{"lo", "hi"}` as outward-rounded decimal strings.
pub fn interval_json(i: &Interval) -> Value {
    json!({
        "lo": decimal_string(&i.lo, 15, Round::Down),
        "hi": decimal_string(&i.hi, 15, Round::Up),
    })
}

/// An algebraic number as its minimal polynomial and an isolating box.
pub fn algebraic_json(min_poly: &QPoly, b: &CBox) -> Value {
    json!({
        "min_poly": min_poly.coeffs().iter().map(rat_to_string).collect::<Vec<_>>(),
        "box": {"re": interval_json(&b.re), "im": interval_json(&b.im)},
    })
}

/// A plain table for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub versions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("heightlab".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Report {
            command: command.into(),
            params: BTreeMap::new(),
            certificates: Vec::new(),
            table: None,
            versions,
            wall_time_ms: None,
        }
    }

    pub fn param(mut self, key: &str, v: Value) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn push(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Certificate>) {
        self.certificates.extend(cs);
    }

    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    /// Certificates in canonical order (stable sort by name).
    pub fn canonical(&self) -> Report {
        let mut r = self.clone();
        r.certificates.sort_by(|a, b| a.name.cmp(&b.name));
        r
    }

    pub fn emit(&self, format: Format) -> Vec<u8> {
        let r = self.canonical();
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => r.csv().into_bytes(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            out.push_str(&cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        };
        match &self.table {
            Some(t) => {
                line(&t.header);
                for row in &t.rows {
                    line(row);
                }
            }
            None => {
                line(&["name", "expected", "actual", "provenance", "pass"].map(String::from));
                for c in &self.certificates {
                    line(&[
                        c.name.clone(),
                        value_text(&c.expected),
                        value_text(&c.actual),
                        serde_json::to_value(c.provenance).unwrap().as_str().unwrap().to_string(),
                        c.pass.to_string(),
                    ]);
                }
            }
        }
        out
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::rat;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new("x");
        let v: Value = serde_json::from_slice(&r.emit(Format::Json)).unwrap();
        assert_eq!(v["certificates"], json!([]));
    }

    #[test]
    fn round_trip_and_rational_literal() {
        let mut r = Report::new("x").param("q", rat_json(&rat(2, 3)));
        r.push(Certificate::equal("b", json!("2/3"), rat_json(&rat(4, 6)), Provenance::Derived));
        r.push(Certificate::equal("a", json!(1), json!(2), Provenance::Claim).with_note("n"));
        let bytes = r.emit(Format::Json);
        assert!(String::from_utf8(bytes.clone()).unwrap().contains("\"2/3\""));
        let back: Report = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, r.canonical());
        assert_eq!(back.certificates[0].name, "a");
        assert!(!back.certificates[0].pass && back.certificates[1].pass);
    }

    #[test]
    fn csv_table() {
        let mut r = Report::new("t");
        r.table = Some(Table {
            header: vec!["n".into(), "degree".into()],
            rows: vec![vec!["1".into(), "4".into()]],
        });
        assert_eq!(String::from_utf8(r.emit(Format::Csv)).unwrap(), "n,degree\n1,4\n");
    }
}
