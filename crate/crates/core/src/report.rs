//! Machine-readable reports.
//!
//! A report is deterministic for identical input bytes and flags: keys are
//! sorted, results keep computation order, and every number that is not a
//! count or a degree is an exact fraction string. Wall-clock time appears only
//! in the text rendering.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::ainf::{AInfCategory, AInfCochain};
use crate::algebra::HochschildCochain;
use crate::cech::{CechCochain, CechDatum};
use crate::error::Error;
use crate::linalg::SparseVec;

/// The published JSON schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(file: &str, bytes: &[u8]) -> Self {
        let name = std::path::Path::new(file).file_name().map_or_else(|| file.to_string(), |n| n.to_string_lossy().into_owned());
        InputDigest { file: name, sha256: sha256_hex(bytes) }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One computed quantity: a cohomology group, a class, a check.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Item {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representative: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Item {
    pub fn new(label: impl Into<String>) -> Self {
        Item { label: label.into(), ..Item::default() }
    }

    pub fn degree(mut self, d: i64) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn weight(mut self, w: Vec<i64>) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn dimension(mut self, d: usize) -> Self {
        self.dimension = Some(d);
        self
    }

    pub fn verdict(mut self, v: impl Into<String>) -> Self {
        self.verdict = Some(v.into());
        self
    }

    pub fn window(mut self, w: usize) -> Self {
        self.window = Some(w);
        self
    }

    pub fn representative(mut self, v: Value) -> Self {
        self.representative = Some(v);
        self
    }

    pub fn details(mut self, v: Value) -> Self {
        self.details = Some(v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Parse(_) | Error::Json(_) => "parse",
            Error::Io(_) => "io",
            Error::CapExceeded { .. } => "cap",
            Error::Unstable { .. } => "unstable",
            Error::ArityInsufficient { .. } => "arity",
            _ => "invalid",
        };
        ErrorInfo { kind: kind.into(), message: e.to_string(), exit_code: e.exit_code() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: InputDigest,
    pub parameters: Map<String, Value>,
    pub status: Status,
    pub summary: Vec<String>,
    pub results: Vec<Item>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Report {
    pub fn new(command: &str, input: InputDigest, parameters: Map<String, Value>) -> Self {
        Report {
            command: command.into(),
            input,
            parameters,
            status: Status::Ok,
            summary: Vec::new(),
            results: Vec::new(),
            warnings: Vec::new(),
            error: None,
        }
    }

    pub fn failed(mut self, e: &Error) -> Self {
        self.status = Status::Error;
        self.error = Some(e.into());
        self
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.status, &self.error) {
            (Status::Ok, _) => 0,
            (_, Some(e)) => e.exit_code,
            (Status::Violation, None) => 2,
            (Status::Error, None) => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.command, self.input.file);
        for line in &self.summary {
            let _ = writeln!(s, "{line}");
        }
        for it in &self.results {
            let mut parts = Vec::new();
            if let Some(d) = it.degree {
                parts.push(format!("degree {d}"));
            }
            if let Some(w) = &it.weight {
                parts.push(format!("weight {w:?}"));
            }
            if let Some(d) = it.dimension {
                parts.push(format!("dim {d}"));
            }
            if let Some(v) = &it.verdict {
                parts.push(v.clone());
            }
            if let Some(w) = it.window {
                parts.push(format!("window {w}"));
            }
            let _ = writeln!(s, "  {}: {}", it.label, parts.join(", "));
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error ({}): {}", e.kind, e.message);
        }
        s
    }
}

/// `[[label, coefficient], ..]` in index order.
pub fn vector_json(v: &SparseVec, labels: &[String]) -> Value {
    Value::Array(
        v.entries()
            .iter()
            .map(|(i, c)| json!([labels.get(*i).cloned().unwrap_or_else(|| format!("#{i}")), c.to_string()]))
            .collect(),
    )
}

pub fn hochschild_json(c: &HochschildCochain, inputs: &[String], outputs: &[String]) -> Value {
    Value::Array(
        c.entries()
            .map(|(ins, o, x)| {
                json!({
                    "inputs": ins.iter().map(|i| inputs[*i].clone()).collect::<Vec<_>>(),
                    "output": outputs.get(o).cloned().unwrap_or_else(|| format!("#{o}")),
                    "coeff": x.to_string(),
                })
            })
            .collect(),
    )
}

pub fn ainf_json(c: &AInfCategory, z: &AInfCochain) -> Value {
    let labels: Vec<String> = c.generators().iter().map(|g| g.label.clone()).collect();
    Value::Array(
        z.terms()
            .iter()
            .map(|(cell, v)| {
                let ins: Vec<String> = cell.inputs.iter().map(|i| labels[*i].clone()).collect();
                json!({
                    "object": c.objects()[cell.object].clone(),
                    "inputs": ins,
                    "output": vector_json(v, &labels),
                })
            })
            .collect(),
    )
}

pub fn cech_json(d: &CechDatum, c: &CechCochain) -> Value {
    Value::Array(
        c.describe(d)
            .into_iter()
            .map(|(piece, v)| json!({"piece": piece, "coefficients": v}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_rendering() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        let mut r = Report::new("hh", InputDigest::new("/tmp/x/a.json", b"{}"), Map::new());
        assert_eq!(r.input.file, "a.json");
        r.results.push(Item::new("HH^0").degree(0).dimension(2));
        assert_eq!(r.to_json(), r.clone().to_json());
        assert!(r.to_text().contains("HH^0: degree 0, dim 2"));
        let f = r.failed(&Error::Unstable { window: 3, next: 4 });
        assert_eq!(f.exit_code(), 3);
    }
}
