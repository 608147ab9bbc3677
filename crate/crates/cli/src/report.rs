//! Tables and their CSV / JSON renderings.
//!
//! CSV files open with comment lines: a `# generated:` timestamp (the only
//! line that differs between identical runs), the echoed config, and the seeds.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            // Debug is the shortest string that parses back to the same bits
            Cell::Float(v) => write!(f, "{v:?}"),
            Cell::Text(v) => f.write_str(v),
            Cell::Missing => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self { name: name.into(), columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv_body(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Long format: one row per (key, series, value).
    pub fn to_long(&self, key: usize) -> Table {
        let mut long = Table::new(format!("{}_long", self.name), [self.columns[key].as_str(), "series", "value"]);
        for row in &self.rows {
            for (c, cell) in row.iter().enumerate() {
                if c != key && *cell != Cell::Missing {
                    long.rows.push(vec![row[key].clone(), Cell::Text(self.columns[c].clone()), cell.clone()]);
                }
            }
        }
        long
    }
}

/// What a subcommand produced.
pub struct Report {
    pub command: &'static str,
    pub tables: Vec<Table>,
    /// Index of the key column used for `--plot-data`, per table.
    pub plot_keys: Vec<usize>,
    pub result: Value,
}

fn timestamp() -> String {
    humantime::format_rfc3339_seconds(SystemTime::now()).to_string()
}

fn header(cfg: &RunConfig) -> Result<String, CliError> {
    let config = serde_json::to_string(&cfg.echo()).map_err(|e| CliError::Config(e.to_string()))?;
    let seeds: Vec<String> = cfg.seeds().iter().map(u64::to_string).collect();
    let mut h = String::new();
    let _ = writeln!(h, "# generated: {}", timestamp());
    let _ = writeln!(h, "# config: {config}");
    let _ = writeln!(h, "# seeds: [{}]", seeds.join(","));
    Ok(h)
}

/// Write-temp-then-rename so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let io = |source| CliError::Write { path: path.into(), source };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

impl Report {
    fn file_name(&self, table: &Table, ext: &str) -> String {
        if self.tables.len() == 1 && !table.name.ends_with("_long") {
            format!("{}.{ext}", self.command)
        } else {
            format!("{}_{}.{ext}", self.command, table.name)
        }
    }

    /// Writes the report under `cfg.out` and returns the paths written.
    pub fn emit(&self, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(&cfg.out).map_err(|source| CliError::Write { path: cfg.out.clone(), source })?;
        let mut written = Vec::new();
        match cfg.format {
            crate::config::Format::Csv => {
                let head = header(cfg)?;
                for t in &self.tables {
                    let path = cfg.out.join(self.file_name(t, "csv"));
                    write_atomic(&path, &(head.clone() + &t.to_csv_body()))?;
                    written.push(path);
                }
            }
            crate::config::Format::Json => {
                let doc = json!({
                    "generated": timestamp(),
                    "command": self.command,
                    "config": cfg.echo(),
                    "seeds": cfg.seeds(),
                    "result": self.result,
                });
                let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))? + "\n";
                let path = cfg.out.join(format!("{}.json", self.command));
                write_atomic(&path, &text)?;
                written.push(path);
            }
        }
        if cfg.plot_data {
            let head = header(cfg)?;
            for (t, &key) in self.tables.iter().zip(&self.plot_keys) {
                let long = t.to_long(key);
                let path = cfg.out.join(self.file_name(&long, "csv"));
                write_atomic(&path, &(head.clone() + &long.to_csv_body()))?;
                written.push(path);
            }
        }
        Ok(written)
    }
}
