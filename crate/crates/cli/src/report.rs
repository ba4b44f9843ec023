use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub const INEXACT_BANNER: &str = "inexact: β was given as a decimal; values are floating point";

/// Tabular view of a report for `--format csv`.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub body: Value,
    pub table: Option<Table>,
    pub inexact: bool,
}

impl Report {
    pub fn new(command: &'static str, config: Value, body: Value) -> Self {
        Report {
            command,
            config,
            body,
            table: None,
            inexact: false,
        }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn inexact(mut self, yes: bool) -> Self {
        self.inexact = yes;
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(self.command));
        m.insert("config".into(), self.config.clone());
        m.insert("result".into(), self.body.clone());
        if self.inexact {
            m.insert("banner".into(), json!(INEXACT_BANNER));
            m.insert("inexact".into(), json!(true));
        }
        Value::Object(m)
    }

    /// Rows if the command has them, otherwise the scalar fields of the result.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.header)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
            }
            None => {
                w.write_record(["field", "value"])?;
                if let Value::Object(m) = &self.body {
                    for (k, v) in m {
                        let s = match v {
                            Value::String(s) => s.clone(),
                            Value::Null => String::new(),
                            other => other.to_string(),
                        };
                        w.write_record([k.as_str(), s.as_str()])?;
                    }
                }
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn render(&self, csv: bool) -> Result<String> {
        if csv {
            self.to_csv()
        } else {
            let mut s = serde_json::to_string_pretty(&self.to_json())?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    std::io::stdout().write_all(text.as_bytes())?;
    if let Some(p) = out {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}
