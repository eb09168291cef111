use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::cli::Command;

pub const MANIFEST_SCHEMA: &str = "sphdpp.manifest.v1";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub subcommand: String,
    pub params: Command,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub out_dir: PathBuf,
    /// File names relative to `out_dir`, in write order.
    pub outputs: Vec<String>,
    pub duration_secs: f64,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Output directory plus the list of files written into it.
pub struct OutDir {
    pub root: PathBuf,
    pub written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// CSV with `# key: value` metadata lines ahead of the column header.
    /// The first metadata line is the schema.
    pub fn csv(
        &mut self,
        name: &str,
        schema: &str,
        meta: &[(&str, String)],
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<()> {
        let path = self.root.join(name);
        let mut file = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        writeln!(file, "# schema: {schema}")?;
        for (k, v) in meta {
            writeln!(file, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.root.join(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn finish(self, params: &Command, seed: Option<u64>, duration_secs: f64) -> Result<()> {
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA.into(),
            subcommand: subcommand_name(params).into(),
            params: params.clone(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            out_dir: self.root.clone(),
            outputs: self.written,
            duration_secs,
        };
        let path = self.root.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

pub fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Sample(_) => "sample",
        Command::Kernel(_) => "kernel",
        Command::Converge(_) => "converge",
        Command::Stats(_) => "stats",
        Command::Replay(_) => "replay",
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}
