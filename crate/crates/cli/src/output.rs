//! Report assembly and emission.
//!
//! A report is a JSON object with sorted keys. `report_hash` is the SHA-256
//! of the compact report with `timing` and `report_hash` removed, so two runs
//! on the same input agree on it even though their timings differ.

use std::io::{self, Write};
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::args::Format;

pub const ENGINE: &str = "enrifact";

pub struct Report {
    pub command: &'static str,
    pub argv: Vec<String>,
    pub inputs: Vec<Value>,
    pub result: Value,
    pub holds: Option<bool>,
    pub error: Option<Value>,
    pub elapsed: Duration,
}

impl Report {
    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert(
            "engine".into(),
            json!({ "name": ENGINE, "version": env!("CARGO_PKG_VERSION") }),
        );
        map.insert("command".into(), json!({ "name": self.command, "argv": self.argv }));
        map.insert("inputs".into(), Value::Array(self.inputs.clone()));
        map.insert("result".into(), self.result.clone());
        if let Some(h) = self.holds {
            map.insert("holds".into(), json!(h));
        }
        if let Some(e) = &self.error {
            map.insert("error".into(), e.clone());
        }
        let hash = hex::encode(Sha256::digest(Value::Object(map.clone()).to_string().as_bytes()));
        map.insert("report_hash".into(), json!(hash));
        // Milliseconds with microsecond resolution.
        let ms = (self.elapsed.as_micros() as f64) / 1000.0;
        map.insert("timing".into(), json!({ "elapsed_ms": ms }));
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = self.to_value().to_string();
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = format!("{} {} {}\n", ENGINE, env!("CARGO_PKG_VERSION"), self.command);
        for input in &self.inputs {
            let field = |k: &str| input.get(k).and_then(Value::as_str).unwrap_or("-").to_string();
            s.push_str(&format!("input   {} ({}, {})\n", field("path"), field("kind"), field("hash")));
        }
        match self.holds {
            Some(true) => s.push_str("verdict holds\n"),
            Some(false) => s.push_str("verdict fails\n"),
            None => {}
        }
        if let Some(e) = &self.error {
            let msg = e.get("message").and_then(Value::as_str).unwrap_or("error");
            s.push_str(&format!("error   {msg}\n"));
        }
        if !self.result.is_null() {
            s.push_str(&serde_json::to_string_pretty(&self.result).expect("serializable"));
            s.push('\n');
        }
        s
    }
}

/// The report without its timing, which is what determinism is judged on.
pub fn without_timing(report: &str) -> String {
    match serde_json::from_str::<Value>(report) {
        Ok(Value::Object(mut map)) => {
            map.remove("timing");
            Value::Object(map).to_string()
        }
        _ => report.to_string(),
    }
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
