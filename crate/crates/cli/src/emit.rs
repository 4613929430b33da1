use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

pub type Record = Map<String, Value>;

/// Serializes `value` into a record. Non-object values end up under `value`.
pub fn record(value: &impl Serialize) -> Record {
    match serde_json::to_value(value).expect("report types serialize") {
        Value::Object(map) => map,
        other => {
            let mut map = Map::new();
            map.insert("value".into(), other);
            map
        }
    }
}

/// Builds a record from literal pairs, keeping their order.
#[macro_export]
macro_rules! rec {
    ($($key:literal => $value:expr),* $(,)?) => {{
        let mut map = $crate::emit::Record::new();
        $(map.insert($key.to_string(), serde_json::json!($value));)*
        map
    }};
}

/// True when the record carries a verdict that is neither "holds" nor
/// "valid". Rows flagged `precondition_met: false` are informational.
pub fn is_failure(r: &Record) -> bool {
    if r.get("precondition_met") == Some(&Value::Bool(false)) {
        return false;
    }
    match r.get("verdict") {
        Some(Value::String(v)) => v != "holds" && v != "valid",
        Some(_) => true,
        None => false,
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn write_records(out: &mut dyn Write, format: Format, records: &[Record]) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(&mut *out);
            let mut header: Option<Vec<&String>> = None;
            for r in records {
                let keys: Vec<&String> = r.keys().collect();
                if header.as_ref() != Some(&keys) {
                    w.write_record(&keys)?;
                    header = Some(keys);
                }
                w.write_record(r.values().map(cell))?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in records {
                let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
        }
    }
    Ok(())
}
