use std::collections::BTreeMap;
use std::fmt::Write as _;

use seifert_census::Rational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Machine-readable result of one command. Keys are sorted, so output is
/// stable for fixed inputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    /// Assertions made by the command; any `false` gives exit code 1.
    pub checks: BTreeMap<String, bool>,
    /// Truncated decimal renderings of rational outputs, only with `--decimal`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub decimal_approximations: BTreeMap<String, String>,
}

pub const DECIMAL_DIGITS: usize = 6;

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.into(), to_value(v));
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) {
        self.outputs.insert(key.into(), to_value(v));
    }

    pub fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.into(), ok);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    /// Adds decimal renderings for every output that is a rational string
    /// (or a list of them).
    pub fn add_decimals(&mut self) {
        for (k, v) in &self.outputs {
            match v {
                Value::String(s) => {
                    if let Some(d) = decimal(s) {
                        self.decimal_approximations.insert(k.clone(), d);
                    }
                }
                Value::Array(xs) => {
                    for (i, x) in xs.iter().enumerate() {
                        if let Some(d) = x.as_str().and_then(decimal) {
                            self.decimal_approximations.insert(format!("{k}[{i}]"), d);
                        }
                    }
                }
                _ => {}
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("command  {}\n", self.command);
        section(&mut out, "inputs", self.inputs.iter().map(|(k, v)| (k.clone(), v.clone())));
        section(&mut out, "outputs", self.outputs.iter().map(|(k, v)| (k.clone(), v.clone())));
        section(&mut out, "checks", self.checks.iter().map(|(k, v)| (k.clone(), Value::Bool(*v))));
        section(
            &mut out,
            "decimal approximations (truncated, not exact)",
            self.decimal_approximations.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))),
        );
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

/// Only non-integral fractions get a rendering; integers are already exact.
fn decimal(s: &str) -> Option<String> {
    if !s.contains('/') {
        return None;
    }
    let r: Rational = s.parse().ok()?;
    Some(format!("~{}", r.to_decimal_string(DECIMAL_DIGITS)))
}

fn section(out: &mut String, title: &str, rows: impl Iterator<Item = (String, Value)>) {
    let mut lines: Vec<(String, String)> = Vec::new();
    for (k, v) in rows {
        match v {
            Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in xs.into_iter().enumerate() {
                    lines.push((format!("{k}[{i}]"), render(x)));
                }
            }
            Value::Object(map) if !map.is_empty() => {
                for (sk, sv) in map {
                    lines.push((format!("{k}.{sk}"), render(sv)));
                }
            }
            v => lines.push((k, render(v))),
        }
    }
    if lines.is_empty() {
        return;
    }
    let w = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    writeln!(out, "\n{title}").unwrap();
    for (k, v) in lines {
        writeln!(out, "  {k:<w$}  {v}").unwrap();
    }
}

fn render(v: Value) -> String {
    match v {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut r = Report::new("d3 --p 5");
        r.input("p", 5);
        r.output("d3", "-3/4");
        r.output("list", vec!["1/3", "2"]);
        r.check("expected", true);
        r.add_decimals();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.decimal_approximations["d3"], "~-0.750000");
        assert_eq!(r.decimal_approximations["list[0]"], "~0.333333");
        assert!(!r.decimal_approximations.contains_key("list[1]"));
    }

    #[test]
    fn table_alignment() {
        let mut r = Report::new("x");
        r.output("a", 1);
        r.output("long_key", "1/2");
        let t = r.to_table();
        assert!(t.contains("  a         1\n"), "{t}");
        assert!(t.contains("  long_key  1/2\n"), "{t}");
        assert!(!t.contains("decimal"));
    }

    #[test]
    fn sorted_keys() {
        let mut r = Report::new("x");
        r.output("b", 1);
        r.output("a", 2);
        let j = r.to_json();
        assert!(j.find("\"a\"").unwrap() < j.find("\"b\"").unwrap());
    }
}
