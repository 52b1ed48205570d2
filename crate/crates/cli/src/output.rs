use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a subcommand produced: a JSON document plus the rows of its CSV table.
pub struct Output {
    pub json: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Value>,
    /// Emit the JSON array one compact element per line (sweeps).
    pub lines: bool,
}

impl Output {
    pub fn single(json: Value, columns: Vec<&'static str>, row: Value) -> Self {
        Output { json, columns, rows: vec![row], lines: false }
    }

    pub fn render(&self, format: Format, header: bool) -> Result<String> {
        match format {
            Format::Json if self.lines => {
                let mut s = String::new();
                for row in self.json.as_array().into_iter().flatten() {
                    s.push_str(&serde_json::to_string(row)?);
                    s.push('\n');
                }
                Ok(s)
            }
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if header {
                    w.write_record(&self.columns)?;
                }
                for row in &self.rows {
                    w.write_record(self.columns.iter().map(|c| cell(&row[*c])))?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
        }
    }

    /// Writes to `out` (appending when asked) or stdout. An appended CSV gets a
    /// header only when the file is new or empty.
    pub fn emit(&self, format: Format, out: Option<&Path>, append: bool) -> Result<()> {
        match out {
            None => {
                let text = self.render(format, true)?;
                std::io::stdout().lock().write_all(text.as_bytes())?;
            }
            Some(path) => {
                let fresh = !append || std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
                let text = self.render(format, fresh)?;
                let mut file = OpenOptions::new()
                    .create(true)
                    .write(true)
                    .append(append)
                    .truncate(!append)
                    .open(path)
                    .with_context(|| format!("opening {}", path.display()))?;
                file.write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_cells() {
        let out = Output::single(json!({}), vec!["a", "b", "c"], json!({"a": null, "b": [1, 2], "c": "x,y"}));
        assert_eq!(out.render(Format::Csv, true).unwrap(), "a,b,c\n,1 2,\"x,y\"\n");
        assert_eq!(out.render(Format::Csv, false).unwrap(), ",1 2,\"x,y\"\n");
    }

    #[test]
    fn json_lines() {
        let out = Output { json: json!([{"b": 1, "a": 2}, {"a": 3}]), columns: vec![], rows: vec![], lines: true };
        assert_eq!(out.render(Format::Json, true).unwrap(), "{\"a\":2,\"b\":1}\n{\"a\":3}\n");
    }
}
