//! Result tables and their CSV / JSON serialisation.
//!
//! Floats are printed as the shortest decimal that round-trips, so output is
//! byte-stable across runs. Each file carries a provenance block with the
//! resolved configuration, constants, tool version and command.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{OmitError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = OmitError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(OmitError::Config(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(i) => i as f64,
            Cell::Float(x) => x,
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Int(i) => i.into(),
            Cell::Float(x) => Value::from(x),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// Shortest round-trip decimal; non-finite values spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        Value::from(x).to_string()
    }
}

/// Column names carry their unit in brackets, e.g. `x[rad_s]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-form remarks (warnings, classifications) kept with the provenance.
    pub notes: Vec<String>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool: String,
    /// Normalised command line: tool, command and format only.
    pub command: String,
    pub constants: Value,
    pub config: Value,
}

impl Provenance {
    pub fn command_name(&self) -> Option<&str> {
        self.command.split_whitespace().nth(1)
    }

    pub fn format(&self) -> Option<OutputFormat> {
        let mut words = self.command.split_whitespace();
        while let Some(w) = words.next() {
            if w == "--format" {
                return words.next().and_then(|f| f.parse().ok());
            }
        }
        None
    }
}

pub fn render_csv(prov: &Provenance, table: &ResultTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tool: {}\n", prov.tool));
    out.push_str(&format!("# command: {}\n", prov.command));
    out.push_str(&format!("# constants: {}\n", prov.constants));
    out.push_str(&format!("# config: {}\n", prov.config));
    for note in &table.notes {
        out.push_str(&format!("# note: {}\n", note.replace('\n', " ")));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(x) => format_float(*x),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(prov: &Provenance, table: &ResultTable) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(|c| c.to_json()).collect()))
        .collect();
    let doc = json!({
        "provenance": {
            "tool": prov.tool,
            "command": prov.command,
            "constants": prov.constants,
            "config": prov.config,
            "notes": table.notes,
        },
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = doc.to_string();
    s.push('\n');
    s
}

pub fn render(format: OutputFormat, prov: &Provenance, table: &ResultTable) -> String {
    match format {
        OutputFormat::Csv => render_csv(prov, table),
        OutputFormat::Json => render_json(prov, table),
    }
}

fn field<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| OmitError::Config(format!("provenance lacks '{key}'")))
}

fn string_field(map: &Map<String, Value>, key: &str) -> Result<String> {
    field(map, key)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| OmitError::Config(format!("provenance '{key}' is not a string")))
}

/// Recovers the provenance block from a CSV or JSON output file.
pub fn parse_provenance(text: &str) -> Result<Provenance> {
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| OmitError::Config(format!("malformed output document: {e}")))?;
        let prov = doc
            .get("provenance")
            .and_then(Value::as_object)
            .ok_or_else(|| OmitError::Config("output document lacks a provenance object".into()))?;
        return Ok(Provenance {
            tool: string_field(prov, "tool")?,
            command: string_field(prov, "command")?,
            constants: field(prov, "constants")?.clone(),
            config: field(prov, "config")?.clone(),
        });
    }

    let mut map = Map::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let Some((key, value)) = line[1..].trim_start().split_once(": ") else {
            continue;
        };
        let parsed = match key {
            "constants" | "config" => serde_json::from_str(value)
                .map_err(|e| OmitError::Config(format!("provenance '{key}' is not JSON: {e}")))?,
            "tool" | "command" => Value::String(value.to_string()),
            _ => continue,
        };
        map.insert(key.to_string(), parsed);
    }
    Ok(Provenance {
        tool: string_field(&map, "tool")?,
        command: string_field(&map, "command")?,
        constants: field(&map, "constants")?.clone(),
        config: field(&map, "config")?.clone(),
    })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| OmitError::Io(e.error.to_string()))?;
    Ok(())
}
