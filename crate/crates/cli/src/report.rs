//! The JSON report every verb prints: inputs with digests, the environment
//! (seed, windows, constants), named checks and verb-specific results.
//! Reports carry no timestamps, so identical inputs give identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Check {
    pub tag: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Report {
    pub verb: &'static str,
    pub inputs: Vec<Input>,
    pub environment: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub results: Value,
}

impl Report {
    pub fn new(verb: &'static str) -> Report {
        Report { verb, inputs: Vec::new(), environment: BTreeMap::new(), checks: Vec::new(), results: Value::Null }
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(Input { path: path.into(), sha256: hex });
    }

    pub fn env(&mut self, key: &str, value: impl Serialize) {
        self.environment.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn check(&mut self, tag: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { tag: tag.into(), pass, detail: detail.into() });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
