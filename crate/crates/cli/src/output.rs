//! Result documents. JSON output wraps the result with the tool version and
//! the configuration that produced it; CSV output carries the same data as
//! `#` comment lines above the header.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, VERSION};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub result: Value,
    pub table: Option<Table>,
}

impl Report {
    pub fn json(result: Value) -> Self {
        Report {
            result,
            table: None,
        }
    }

    pub fn with_table(result: Value, table: Table) -> Self {
        Report {
            result,
            table: Some(table),
        }
    }
}

pub fn render(
    command: &str,
    config: &Value,
    report: &Report,
    format: Format,
) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let doc = json!({
                "tool": "preper",
                "version": VERSION,
                "command": command,
                "config": config,
                "result": report.result,
            });
            let mut s =
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| CliError::Parse(format!("format: {command} has no csv output")))?;
            let mut out = format!("# preper {VERSION} {command}\n# config: {config}\n");
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(&table.headers).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?);
            Ok(out)
        }
    }
}

/// JSON numbers cannot hold NaN or infinities; those become `null`.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
