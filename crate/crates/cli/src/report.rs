//! The JSON report and its plain-text summary.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::scenario::Scenario;

#[derive(Debug, Serialize)]
pub struct ScenarioEcho {
    pub variety: String,
    pub subscheme: Option<String>,
    pub window: u32,
    pub ring: String,
    pub apl_degree_cap: u32,
    pub apl_working_cap: u32,
    pub lift_order: u32,
    pub crosscheck: bool,
    pub tasks: Vec<String>,
}

impl ScenarioEcho {
    pub fn new(s: &Scenario, window: u32) -> Self {
        Self {
            variety: format!("P{}", s.variety),
            subscheme: s.subscheme.clone(),
            window,
            ring: s.ring.to_string(),
            apl_degree_cap: s.apl_degree_cap,
            apl_working_cap: s.apl_working_cap,
            lift_order: s.lift_order,
            crosscheck: s.crosscheck,
            tasks: s.tasks.iter().map(|t| t.name().to_string()).collect(),
        }
    }
}

/// One reported number (or small table) and the pipeline that produced it.
#[derive(Debug, Serialize)]
pub struct Entry {
    pub value: Value,
    pub pipeline: String,
    /// The window `w` at which the value was confirmed equal to the value
    /// at `w + 2`, when stability applies.
    pub stable_at_window: Option<u32>,
}

#[derive(Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub scenario: ScenarioEcho,
    pub results: Map<String, Value>,
    pub assertions: Vec<Assertion>,
    /// Wall-clock seconds per task; not part of the canonical report.
    pub timing: Map<String, Value>,
}

impl Report {
    pub fn new(scenario: ScenarioEcho) -> Self {
        Self { scenario, results: Map::new(), assertions: Vec::new(), timing: Map::new() }
    }

    pub fn result(&mut self, name: &str, value: impl Into<Value>, pipeline: &str, stable_at_window: Option<u32>) {
        let entry = Entry { value: value.into(), pipeline: pipeline.into(), stable_at_window };
        self.results.insert(name.into(), serde_json::to_value(entry).expect("serializable"));
    }

    pub fn assert(&mut self, name: &str, expected: impl Into<Value>, actual: impl Into<Value>) {
        let (expected, actual) = (expected.into(), actual.into());
        self.assertions.push(Assertion { name: name.into(), passed: expected == actual, expected, actual });
    }

    /// An assertion whose check returned an error message on failure.
    pub fn assert_ok<E: std::fmt::Display>(&mut self, name: &str, outcome: Result<(), E>) {
        let actual = match outcome {
            Ok(()) => Value::from("ok"),
            Err(e) => Value::from(e.to_string()),
        };
        self.assert(name, "ok", actual);
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let s = &self.scenario;
        out.push_str(&format!("scenario: {}", s.variety));
        if let Some(z) = &s.subscheme {
            out.push_str(&format!(", Z = V({z})"));
        }
        out.push_str(&format!(", window {}, tasks {}\n", s.window, s.tasks.join(", ")));
        for (name, entry) in &self.results {
            let stable = match entry["stable_at_window"].as_u64() {
                Some(w) => format!("  [stable at w={w}]"),
                None => String::new(),
            };
            out.push_str(&format!("  {name}: {}  ({}){stable}\n", entry["value"], entry["pipeline"].as_str().unwrap_or("")));
        }
        let failed: Vec<&Assertion> = self.assertions.iter().filter(|a| !a.passed).collect();
        out.push_str(&format!("assertions: {}/{} passed\n", self.assertions.len() - failed.len(), self.assertions.len()));
        for a in failed {
            out.push_str(&format!("  FAILED {}: expected {}, got {}\n", a.name, a.expected, a.actual));
        }
        out
    }
}
