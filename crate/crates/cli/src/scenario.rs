//! The flat `key = value` scenario format.

use std::fmt;

use deform::ArtinianAlgebra;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("key `{key}`: {message}")]
    Value { key: &'static str, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

pub const KEYS: [&str; 9] =
    ["variety", "subscheme", "window", "ring", "apl_degree_cap", "apl_working_cap", "lift_order", "crosscheck", "tasks"];

/// Tasks in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Axioms,
    Cech,
    Cohomology,
    TotCompare,
    TwOrders,
    Tangent,
    Lift,
    Crosscheck,
}

impl Task {
    pub const ALL: [Task; 8] =
        [Task::Axioms, Task::Cech, Task::Cohomology, Task::TotCompare, Task::TwOrders, Task::Tangent, Task::Lift, Task::Crosscheck];

    pub fn name(self) -> &'static str {
        match self {
            Task::Axioms => "axioms",
            Task::Cech => "cech",
            Task::Cohomology => "cohomology",
            Task::TotCompare => "tot-compare",
            Task::TwOrders => "tw-orders",
            Task::Tangent => "tangent",
            Task::Lift => "lift",
            Task::Crosscheck => "crosscheck",
        }
    }

    /// Tasks that need a subscheme.
    pub fn needs_subscheme(self) -> bool {
        matches!(self, Task::TwOrders | Task::Tangent | Task::Lift | Task::Crosscheck)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Dual,
    Truncated(u32),
}

impl RingSpec {
    pub fn algebra(&self) -> ArtinianAlgebra {
        match self {
            RingSpec::Dual => ArtinianAlgebra::dual_numbers(),
            RingSpec::Truncated(n) => ArtinianAlgebra::truncated_poly(*n).expect("validated order"),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Dual => f.write_str("dual"),
            RingSpec::Truncated(n) => write!(f, "t^{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    /// `n` of `ℙⁿ`.
    pub variety: usize,
    pub subscheme: Option<String>,
    pub window: Option<u32>,
    pub ring: RingSpec,
    pub apl_degree_cap: u32,
    pub apl_working_cap: u32,
    pub lift_order: u32,
    pub crosscheck: bool,
    /// Sorted into execution order, without duplicates.
    pub tasks: Vec<Task>,
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

fn integer(key: &'static str, v: &str) -> Result<u32, ScenarioError> {
    unquote(v).parse().map_err(|_| ScenarioError::Value { key, message: format!("expected a non-negative integer, got `{v}`") })
}

fn parse_ring(v: &str) -> Result<RingSpec, ScenarioError> {
    let v = unquote(v);
    if v == "dual" {
        return Ok(RingSpec::Dual);
    }
    let bad = || ScenarioError::Value { key: "ring", message: format!("expected `dual` or `t^n` with n ≥ 2, got `{v}`") };
    let n: u32 = v.strip_prefix("t^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if n < 2 {
        return Err(bad());
    }
    Ok(RingSpec::Truncated(n))
}

fn parse_tasks(v: &str) -> Result<Vec<Task>, ScenarioError> {
    let v = v.trim();
    let inner = v.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(v);
    let mut tasks = Vec::new();
    for item in inner.split(',').map(unquote).filter(|s| !s.is_empty()) {
        let task = Task::ALL
            .into_iter()
            .find(|t| t.name() == item)
            .ok_or_else(|| ScenarioError::Value { key: "tasks", message: format!("unknown task `{item}`") })?;
        tasks.push(task);
    }
    if tasks.is_empty() {
        return Err(ScenarioError::Value { key: "tasks", message: "no tasks given".into() });
    }
    tasks.sort();
    tasks.dedup();
    Ok(tasks)
}

impl Scenario {
    /// Parses and validates every key; nothing is computed.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut seen: Vec<(&'static str, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ScenarioError::Syntax { line: i + 1 })?;
            let k = k.trim();
            let key = KEYS
                .into_iter()
                .find(|known| *known == k)
                .ok_or_else(|| ScenarioError::UnknownKey { line: i + 1, key: k.into() })?;
            if seen.iter().any(|(s, _)| *s == key) {
                return Err(ScenarioError::DuplicateKey { line: i + 1, key: k.into() });
            }
            seen.push((key, v.trim().to_string()));
        }
        let get = |key: &str| seen.iter().find(|(k, _)| *k == key).map(|(_, v)| v.as_str());

        let variety = match unquote(get("variety").ok_or(ScenarioError::Missing("variety"))?) {
            "P1" => 1,
            "P2" => 2,
            other => {
                return Err(ScenarioError::Value { key: "variety", message: format!("unsupported variety `{other}` (P1 or P2)") })
            }
        };
        let subscheme = get("subscheme").map(|v| unquote(v).to_string());
        let window = get("window").map(|v| integer("window", v)).transpose()?;
        let ring = get("ring").map(parse_ring).transpose()?.unwrap_or(RingSpec::Dual);
        let apl_degree_cap = get("apl_degree_cap").map(|v| integer("apl_degree_cap", v)).transpose()?.unwrap_or(1);
        if apl_degree_cap == 0 {
            return Err(ScenarioError::Value { key: "apl_degree_cap", message: "must be at least 1".into() });
        }
        let apl_working_cap =
            get("apl_working_cap").map(|v| integer("apl_working_cap", v)).transpose()?.unwrap_or(2 * apl_degree_cap);
        if apl_working_cap < apl_degree_cap {
            return Err(ScenarioError::Value { key: "apl_working_cap", message: "must be at least apl_degree_cap".into() });
        }
        let lift_order = get("lift_order").map(|v| integer("lift_order", v)).transpose()?.unwrap_or(3);
        if lift_order != 3 {
            return Err(ScenarioError::Value { key: "lift_order", message: "only 3 (lifts to t^3) is supported".into() });
        }
        let crosscheck = match get("crosscheck").map(unquote) {
            None | Some("false") => false,
            Some("true") => true,
            Some(other) => {
                return Err(ScenarioError::Value { key: "crosscheck", message: format!("expected true or false, got `{other}`") })
            }
        };
        let mut tasks = parse_tasks(get("tasks").ok_or(ScenarioError::Missing("tasks"))?)?;
        if crosscheck && !tasks.contains(&Task::Crosscheck) {
            tasks.push(Task::Crosscheck);
        }
        if subscheme.is_none() {
            if let Some(t) = tasks.iter().find(|t| t.needs_subscheme()) {
                return Err(ScenarioError::Value { key: "subscheme", message: format!("task `{t}` needs a subscheme") });
            }
        }
        Ok(Self { variety, subscheme, window, ring, apl_degree_cap, apl_working_cap, lift_order, crosscheck, tasks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_scenario() {
        let s = Scenario::parse(
            "# conic\nvariety = \"P2\"\nsubscheme = \"X0^2 - X1*X2\"  # smooth\nwindow = 4\nring = \"t^3\"\n\
             apl_degree_cap = 1\ncrosscheck = true\ntasks = [lift, tangent]\n",
        )
        .unwrap();
        assert_eq!(s.variety, 2);
        assert_eq!(s.ring, RingSpec::Truncated(3));
        assert_eq!(s.apl_working_cap, 2);
        assert_eq!(s.tasks, vec![Task::Tangent, Task::Lift, Task::Crosscheck]);
    }

    #[test]
    fn rejects_bad_input_naming_the_key() {
        let err = |t: &str| Scenario::parse(t).unwrap_err().to_string();
        assert!(err("variety = P1\ncolour = red\ntasks = [cech]").contains("`colour`"));
        assert!(err("variety = \"P3\"\ntasks = [cech]").contains("unsupported variety"));
        assert!(err("variety = P1\ntasks = [tangent]").contains("`subscheme`"));
        assert!(err("variety = P1\nring = t^1\ntasks = [cech]").contains("`ring`"));
        assert!(err("variety = P1\nwindow = -1\ntasks = [cech]").contains("`window`"));
        assert!(err("variety = P1\ntasks = [cech]\ntasks = [cech]").contains("duplicate"));
        assert!(err("variety = P1").contains("`tasks`"));
    }
}
