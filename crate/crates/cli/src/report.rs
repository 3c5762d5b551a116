//! Output in `key = value` lines or as one JSON object with the same keys.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<(String, String, Value)>,
}

impl Report {
    /// Add a key whose text and JSON forms differ.
    pub fn push(&mut self, key: &str, text: impl Into<String>, json: impl Serialize) {
        let json = serde_json::to_value(json).expect("report values serialize");
        self.lines.push((key.to_string(), text.into(), json));
    }

    /// Add a key whose text form is its JSON rendering (numbers, lists).
    pub fn value(&mut self, key: &str, v: impl Serialize) {
        let json = serde_json::to_value(v).expect("report values serialize");
        let text = render(&json);
        self.lines.push((key.to_string(), text, json));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, t, _)| t.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self
                .lines
                .iter()
                .map(|(k, t, _)| format!("{k} = {t}\n"))
                .collect(),
            Format::Json => {
                let map: Map<String, Value> = self
                    .lines
                    .iter()
                    .map(|(k, _, j)| (k.clone(), j.clone()))
                    .collect();
                format!("{}\n", Value::Object(map))
            }
        }
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(render).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}
