//! JSON and CSV emission.
//!
//! Floats are serialized with 17 significant digits so that every f64
//! round-trips exactly; parsing emitted JSON into a `Value` and
//! re-emitting it through the same serializer reproduces the bytes
//! (object keys are kept sorted by the `Value` map itself).

use std::io::Write;

use serde_json::ser::Formatter;
use serde_json::Value;

/// Compact JSON with lossless float formatting.
#[derive(Clone, Copy, Default)]
pub struct LosslessFloats;

impl Formatter for LosslessFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, LosslessFloats);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// One output document: rows of (column name, cell) pairs. JSON renders
/// an object per row (or a bare object for a single row); CSV renders a
/// header line and the rows.
pub struct Table {
    pub rows: Vec<Vec<(&'static str, Value)>>,
}

impl Table {
    pub fn single(row: Vec<(&'static str, Value)>) -> Self {
        Self { rows: vec![row] }
    }

    pub fn to_json(&self) -> String {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, Value> = row
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                Value::Object(map)
            })
            .collect();
        if objects.len() == 1 {
            to_json_string(&objects[0])
        } else {
            to_json_string(&Value::Array(objects))
        }
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            let headers: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
            writer.write_record(&headers).expect("csv header");
        }
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|(_, v)| cell_text(v)).collect();
            writer.write_record(&cells).expect("csv row");
        }
        String::from_utf8(writer.into_inner().expect("csv buffer")).expect("csv utf8")
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.16e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

pub fn float(v: f64) -> Value {
    Value::from(v)
}
