use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Canonical text of expressions and exact values, keyed by role.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<BTreeMap<String, String>>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check {
            name: name.into(),
            status,
            note: None,
            values: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn value(mut self, key: impl Into<String>, v: impl ToString) -> Self {
        self.values.insert(key.into(), v.to_string());
        self
    }

    pub fn point(mut self, p: BTreeMap<String, String>) -> Self {
        self.points.push(p);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub model: String,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub status: Status,
}

impl ReportDocument {
    pub fn new(model: impl Into<String>, command: impl Into<String>, seed: u64) -> Self {
        ReportDocument {
            tool: "gaugekit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            model: model.into(),
            command: command.into(),
            seed,
            checks: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
        self.status = if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} | model {} | {} | seed {}",
            self.tool, self.version, self.model, self.command, self.seed
        );
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {}", c.status.tag(), c.name);
            if let Some(n) = &c.note {
                let _ = writeln!(out, "    note: {n}");
            }
            for (k, v) in &c.values {
                let _ = writeln!(out, "    {k} = {v}");
            }
            for p in &c.points {
                let coords: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(out, "    at {}", coords.join(" "));
            }
        }
        let _ = writeln!(out, "overall: {}", self.status.tag());
        out
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
