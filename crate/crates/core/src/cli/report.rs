use std::fs;
use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// `scramble-core <version> (<git describe>)`.
pub fn build_id() -> String {
    format!(
        "scramble-core {} ({})",
        env!("CARGO_PKG_VERSION"),
        option_env!("SCRAMBLE_BUILD_ID").unwrap_or("unknown")
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub build: String,
    pub experiment: String,
    pub wall_clock_seconds: f64,
    /// The configuration as TOML; it parses back to the same config.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    pub results: serde_json::Value,
    pub files: Vec<FileEntry>,
}

/// Writes files into one directory and keeps the manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self, CliError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| CliError::Io(format!("{}: {e}", root.display())))?;
        Ok(OutputDir {
            root,
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Resolves a relative name, refusing anything that could escape the
    /// directory.
    fn target(&self, name: &str) -> Result<PathBuf, CliError> {
        let rel = Path::new(name);
        let plain = !name.is_empty() && rel.components().all(|c| matches!(c, Component::Normal(_)));
        if !plain {
            return Err(CliError::Io(format!(
                "refusing to write `{name}` outside the output directory"
            )));
        }
        Ok(self.root.join(rel))
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.target(name)?;
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
        }
        fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.retain(|f| f.path != name);
        self.files.push(FileEntry {
            path: name.to_string(),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// Renders into a buffer with `render` and writes the result.
    pub fn write_with(
        &mut self,
        name: &str,
        render: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let mut buf = Vec::new();
        render(&mut buf).map_err(|e| CliError::Io(format!("{name}: {e}")))?;
        self.write(name, &buf)
    }

    pub fn manifest(&self) -> Vec<FileEntry> {
        self.files.clone()
    }

    /// Writes `report.json` (not itself listed in the manifest).
    pub fn write_report(&self, report: &Report) -> Result<PathBuf, CliError> {
        let path = self.root.join("report.json");
        let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&path, json + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
