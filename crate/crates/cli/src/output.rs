use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Where the primary output of a run goes.
#[derive(Debug, Clone, Serialize)]
pub struct Sink {
    pub out: Option<PathBuf>,
    pub meta: Option<PathBuf>,
}

impl Sink {
    /// Writes `body` to the output file, or to stdout without one.
    pub fn write(&self, body: &str) -> io::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, body),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(body.as_bytes())?;
                stdout.flush()
            }
        }
    }

    fn meta_path(&self) -> Option<PathBuf> {
        self.meta.clone().or_else(|| self.out.as_ref().map(|p| sidecar(p)))
    }

    /// Writes the run metadata next to the output, or echoes it to stderr
    /// when the run has no output file.
    pub fn write_meta(&self, command: &str, config: Value, identities: &[&str]) -> io::Result<()> {
        let meta = json!({
            "program": "xiflow",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "identities": identities,
            "output": self.out,
        });
        let text = serde_json::to_string_pretty(&meta).map_err(io::Error::other)? + "\n";
        match self.meta_path() {
            Some(path) => fs::write(path, text),
            None => io::stderr().lock().write_all(text.as_bytes()),
        }
    }
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    path.with_file_name(name)
}

/// Human-readable summary lines; they go to stderr so stdout stays parseable.
pub fn summary(line: impl AsRef<str>) {
    eprintln!("{}", line.as_ref());
}
