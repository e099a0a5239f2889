use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{Resolver, Setting};
use crate::error::CliError;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest representation that parses back to the same `f64`; exponent form for very
/// small or large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-3..1e16).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, mut row: Vec<String>) {
        row.resize(self.header.len(), String::new());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        self.write_to(std::io::BufWriter::new(file))
    }
}

/// `alpha_0 .. alpha_m` column names.
pub fn alpha_columns(prefix: &str, modes: usize) -> Vec<String> {
    (0..=modes).map(|i| format!("{prefix}_{i}")).collect()
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    argv: &'a [String],
    parameters: &'a BTreeMap<String, Setting>,
    outputs: &'a [String],
    summary: &'a BTreeMap<String, Value>,
    warnings: &'a [String],
    status: &'static str,
    failure: Option<String>,
}

/// State of one invocation: resolved parameters, files written and the manifest location.
pub struct Session {
    pub command: &'static str,
    pub argv: Vec<String>,
    pub res: Resolver,
    pub outputs: Vec<String>,
    pub summary: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    manifest: Option<PathBuf>,
    base: Option<PathBuf>,
}

impl Session {
    pub fn new(command: &'static str, argv: Vec<String>, res: Resolver) -> Self {
        Session {
            command,
            argv,
            res,
            outputs: Vec::new(),
            summary: BTreeMap::new(),
            warnings: Vec::new(),
            manifest: None,
            base: None,
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn warn(&mut self, msg: String) {
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    /// Writes a single table to `out` (manifest alongside) or to standard output.
    pub fn emit(&mut self, table: &Table, out: Option<&Path>, manifest: Option<&Path>) -> Result<(), CliError> {
        match out {
            Some(path) => {
                table.save(path)?;
                self.outputs.push(path.display().to_string());
                self.manifest = Some(manifest.map(Path::to_path_buf).unwrap_or_else(|| sidecar(path)));
            }
            None => {
                table.write_to(std::io::stdout().lock())?;
                self.manifest = manifest.map(Path::to_path_buf);
            }
        }
        Ok(())
    }

    /// Creates `dir` and places the manifest in it, so a later failure still leaves one behind.
    pub fn use_dir(&mut self, dir: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("--out-dir {}: {e}", dir.display())))?;
        self.manifest = Some(dir.join("manifest.json"));
        self.base = Some(dir.to_path_buf());
        Ok(())
    }

    /// Saves `table` under the output directory; `name` may contain subdirectories.
    pub fn save(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let base = self.base.clone().expect("output directory not set");
        let path = base.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        table.save(&path)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// Writes the manifest (if there is a place for it) recording how the command ended.
    pub fn finish(mut self, result: &Result<(), CliError>) -> Result<(), CliError> {
        for key in self.res.unused_keys() {
            self.warn(format!("config key `{key}` is not used by `{}`", self.command));
        }
        let Some(path) = &self.manifest else {
            return Ok(());
        };
        let manifest = Manifest {
            tool: TOOL,
            version: VERSION,
            command: self.command,
            argv: &self.argv,
            parameters: &self.res.record,
            outputs: &self.outputs,
            summary: &self.summary,
            warnings: &self.warnings,
            status: if result.is_ok() { "ok" } else { "failed" },
            failure: result.as_ref().err().map(|e| e.to_string()),
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Ok(())
    }
}

/// `run.csv` -> `run.manifest.json`.
fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("manifest.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 5.5, 1e-300, -2.5e17, 0.40329847561, 2.0816681711721685e-17] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(200.0), "200");
        assert_eq!(num(2.5e-17), "2.5e-17");
    }

    #[test]
    fn short_rows_are_padded() {
        let mut t = Table::new(["a", "b", "c"]);
        t.push(vec!["1".into()]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b,c\n1,,\n");
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar(Path::new("out/table.csv")), PathBuf::from("out/table.manifest.json"));
    }
}
