use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// A versioned JSON report. Maps are ordered, so output is deterministic
/// except for `timings`, which can be omitted.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: String,
    pub config: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config: BTreeMap::new(),
            results: BTreeMap::new(),
            pass: true,
            timings: Some(BTreeMap::new()),
        }
    }

    pub fn config(&mut self, key: &str, value: impl Serialize) {
        self.config.insert(key.into(), to_value(value));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), to_value(value));
    }

    pub fn timing(&mut self, key: &str, seconds: f64) {
        if let Some(t) = self.timings.as_mut() {
            t.insert(key.into(), seconds);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serialisable");
        s.push('\n');
        s
    }

    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => fs::write(path, self.to_json())?,
            None => print!("{}", self.to_json()),
        }
        Ok(())
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values are serialisable")
}
