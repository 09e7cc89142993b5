use std::io::Write;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "oslab/1";

/// One verified statement `lhs ≤ rhs` (equalities are encoded as
/// `|difference| ≤ tolerance`).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub instance: usize,
    pub inputs_hash: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub warning: Option<String>,
}

impl Row {
    /// `lhs ≤ rhs + slack`.
    pub fn le(name: impl Into<String>, instance: usize, hash: &str, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            name: name.into(),
            instance,
            inputs_hash: hash.to_string(),
            lhs,
            rhs,
            pass: lhs <= rhs + slack,
            warning: None,
        }
    }

    /// `error ≤ tol`.
    pub fn within(name: impl Into<String>, instance: usize, hash: &str, error: f64, tol: f64) -> Self {
        Self::le(name, instance, hash, error, tol, 0.0)
    }

    /// A yes/no fact recorded as `failures ≤ 0`.
    pub fn holds(name: impl Into<String>, instance: usize, hash: &str, ok: bool) -> Self {
        Self::le(name, instance, hash, if ok { 0.0 } else { 1.0 }, 0.0, 0.0)
    }

    pub fn warn(mut self, warning: Option<String>) -> Self {
        self.warning = warning;
        self
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Float with 17 significant digits, `null` when not finite.
fn float17(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Row", 8)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("instance", &self.instance)?;
        st.serialize_field("inputsHash", &self.inputs_hash)?;
        st.serialize_field("lhs", &float17(self.lhs))?;
        st.serialize_field("rhs", &float17(self.rhs))?;
        st.serialize_field("margin", &float17(self.margin()))?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("warning", &self.warning)?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub warnings: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub timestamp: u64,
    pub summary: Summary,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value, rows: Vec<Row>) -> Self {
        let passed = rows.iter().filter(|r| r.pass).count();
        let summary = Summary {
            checks: rows.len(),
            passed,
            failed: rows.len() - passed,
            warnings: rows.iter().filter(|r| r.warning.is_some()).count(),
        };
        let timestamp =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { schema: SCHEMA, command: command.to_string(), config, timestamp, summary, rows }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn write_json(&self, out: &mut impl Write) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_csv(&self, out: &mut impl Write) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "instance", "inputs_hash", "lhs", "rhs", "margin", "pass", "warning"])?;
        let f = |x: f64| if x.is_finite() { format!("{x:.16e}") } else { String::new() };
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                r.instance.to_string(),
                r.inputs_hash.clone(),
                f(r.lhs),
                f(r.rhs),
                f(r.margin()),
                r.pass.to_string(),
                r.warning.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// First 16 hex digits of the SHA-256 of the instance's canonical JSON.
pub fn inputs_hash(value: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(value).expect("instances serialize");
    let digest = Sha256::digest(&bytes);
    format!("{digest:x}")[..16].to_string()
}
