//! Command reports and their two renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use shiftsem_core::check::Check;
use shiftsem_core::regset::{Cardinality, RegularSet};
use shiftsem_core::ShiftAutomaton;

/// Everything a command computed. Maps are ordered, so the JSON rendering
/// is byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub spec: Option<String>,
    pub inputs: BTreeMap<String, Value>,
    pub verdict: String,
    pub results: BTreeMap<String, Value>,
    pub scope: Vec<String>,
    pub exit_status: i32,
}

impl Report {
    pub fn new(command: &str, spec: Option<&str>) -> Self {
        Report {
            command: command.into(),
            spec: spec.map(Into::into),
            inputs: BTreeMap::new(),
            verdict: String::new(),
            results: BTreeMap::new(),
            scope: Vec::new(),
            exit_status: 0,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), v.into());
        self
    }

    pub fn scope(&mut self, note: impl Into<String>) -> &mut Self {
        self.scope.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(s) = &self.spec {
            let _ = writeln!(out, "spec: {s}");
        }
        if !self.inputs.is_empty() {
            out.push_str("inputs:\n");
            for (k, v) in &self.inputs {
                human_value(&mut out, 1, k, v);
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        if !self.results.is_empty() {
            out.push_str("results:\n");
            for (k, v) in &self.results {
                human_value(&mut out, 1, k, v);
            }
        }
        if !self.scope.is_empty() {
            out.push_str("scope:\n");
            for s in &self.scope {
                let _ = writeln!(out, "  - {s}");
            }
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn human_value(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            let _ = writeln!(out, "{pad}{key}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, x) in items.iter().enumerate() {
                human_value(out, depth + 1, &format!("[{i}]"), x);
            }
        }
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, x) in map {
                human_value(out, depth + 1, k, x);
            }
        }
        _ => unreachable!(),
    }
}

/// Members of `set` up to `max_len`, at most `limit` of them. `truncated`
/// is set whenever the list is not the whole set; the cardinality always
/// comes from the automaton.
pub fn word_sample(aut: &ShiftAutomaton, set: &RegularSet, max_len: usize, limit: usize) -> Value {
    let (words, cut) = set.words_up_to_limit(max_len, limit);
    let card = set.cardinality();
    let complete = match card {
        Cardinality::Empty => true,
        Cardinality::Finite(all) => all.len() == words.len(),
        Cardinality::Infinite => false,
    };
    let listed: Vec<String> = words.iter().map(|w| aut.render(w.letters())).collect();
    json!({
        "cardinality": card.label(),
        "max_len": max_len,
        "words": listed,
        "truncated": cut || !complete,
    })
}

/// `{w1, w2, …}` with a trailing `…` when truncated.
pub fn brace(words: &[String], truncated: bool) -> String {
    let mut parts = words.to_vec();
    if truncated {
        parts.push("…".into());
    }
    format!("{{{}}}", parts.join(", "))
}

pub fn checks_value(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "cases": c.cases,
                    "scope": c.scope,
                    "counterexample": c.counterexample,
                })
            })
            .collect(),
    )
}
