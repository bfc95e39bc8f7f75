//! Number formatting, CSV/JSON rendering and atomic file output.

use serde_json::{Map, Value};
use std::io::Write;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string().to_lowercase()
    }
}

/// JSON number with the same digits as the CSV output; `null` if not finite.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt_f64(x).parse().expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

pub struct Table {
    pub header: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# hulthen {VERSION}\n"));
        for (k, v) in &self.header {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn json_document(params: Map<String, Value>, results: Vec<Value>, command_line: &str) -> String {
    let mut prov = Map::new();
    prov.insert("version".into(), Value::String(VERSION.into()));
    prov.insert("command_line".into(), Value::String(command_line.into()));
    let mut doc = Map::new();
    doc.insert("params".into(), Value::Object(params));
    doc.insert("results".into(), Value::Array(results));
    doc.insert("provenance".into(), Value::Object(prov));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    s.push('\n');
    s
}

/// Write through a temp file in the target directory and rename over the target.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
