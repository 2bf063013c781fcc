//! Line-delimited JSON event records.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

/// An append-only list of JSON records, one per line.
///
/// Keys are emitted in sorted order, so equal runs give byte-identical logs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    lines: Vec<String>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a record with `"kind": kind` merged into the fields of `body`,
    /// which must serialize to an object (or unit).
    pub fn record<T: Serialize>(&mut self, kind: &str, body: &T) {
        let mut map = match serde_json::to_value(body).expect("serializable record") {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        map.insert("kind".into(), Value::String(kind.into()));
        self.lines.push(Value::Object(map).to_string());
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn extend(&mut self, other: EventLog) {
        self.lines.extend(other.lines);
    }

    pub fn to_text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }

    pub fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        for l in &self.lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    }
}
