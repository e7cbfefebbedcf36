//! File emission helpers: atomic writes plus the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use trajan::{Error, Result};

/// Write via a sibling temp file and rename, so a crashed run never leaves a
/// half-written output behind.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, bytes)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| Error::InvalidInput(format!("cannot rename to {}: {e}", path.display())))?;
    Ok(())
}

/// Everything needed to rerun a command bit-identically: the subcommand, its
/// parameters, and summary counts. No timestamps, so reruns match exactly.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub parameters: BTreeMap<&'static str, String>,
    pub counts: BTreeMap<&'static str, u64>,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Manifest {
            command,
            parameters: BTreeMap::new(),
            counts: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.parameters.insert(key, value.to_string());
        self
    }

    pub fn opt_path(self, key: &'static str, value: Option<&PathBuf>) -> Self {
        match value {
            Some(p) => self.param(key, p.display()),
            None => self.param(key, ""),
        }
    }

    pub fn count(mut self, key: &'static str, n: u64) -> Self {
        self.counts.insert(key, n);
        self
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        atomic_write(&out_dir.join("manifest.json"), text.as_bytes())
    }
}
