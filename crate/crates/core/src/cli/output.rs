//! Deterministic text, CSV and JSON emission.

use serde::Serialize;
use serde_json::Value;

use super::config::RunConfig;

/// 12 significant digits in scientific notation, `.` separator.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

/// Rounds to 12 significant digits; non-finite values become JSON null.
pub fn round12(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
        serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    } else {
        Value::Null
    }
}

/// Applies [`round12`] to every float in a JSON tree.
pub fn round_tree(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => round12(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(round_tree).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_tree(v))).collect()),
        other => other,
    }
}

pub fn rounded<T: Serialize>(value: &T) -> Value {
    round_tree(serde_json::to_value(value).expect("serialisable output"))
}

/// Builds a CSV document: resolved-config line, header, rows, trailing `#` notes.
pub struct CsvDoc {
    text: String,
}

impl CsvDoc {
    pub fn new(config: &RunConfig, header: &[&str]) -> Self {
        let mut text = format!("# resolved-config: {}\n", config.canonical_json());
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| fmt_num(*v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn note(&mut self, note: &str) {
        self.text.push_str("# ");
        self.text.push_str(note);
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Pretty JSON with a trailing newline.
pub fn json_doc(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable output");
    s.push('\n');
    s
}
