use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }

    /// Worst of two verdicts: any failure fails, otherwise any inconclusive step is inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn check(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Input name → SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    pub budgets: BTreeMap<String, u64>,
    pub results: Value,
    pub node_counts: BTreeMap<String, u64>,
    pub wall_time_ms: u128,
    pub verdict: Verdict,
    /// Human-readable lines, echoed to stderr.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            budgets: BTreeMap::new(),
            results: Value::Object(Default::default()),
            node_counts: BTreeMap::new(),
            wall_time_ms: 0,
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("result serializes");
        self.results.as_object_mut().expect("results is an object").insert(key.to_string(), v);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn nodes(&mut self, key: &str, n: u64) {
        self.node_counts.insert(key.to_string(), n);
    }

    /// Folds a check into the verdict, recording a note when it does not pass.
    pub fn require(&mut self, v: Verdict, what: &str) {
        if v != Verdict::Pass {
            self.note(format!("{what}: {v:?}"));
        }
        self.verdict = self.verdict.and(v);
    }

    /// Reads an input file and records its hash.
    pub fn read_input(&mut self, name: &str, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(name.to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
