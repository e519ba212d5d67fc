use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::files::MANIFEST;
use crate::error::{Error, Result};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Inventory of a run directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// sha256 of the config text.
    pub config_sha256: String,
    pub code_version: String,
    /// Wall-clock start and end, seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    /// Relative path to sha256 digest, for every file except the manifest.
    pub files: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn now() -> f64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Digests of every regular file under `dir`, recursively, skipping the
/// manifest itself and nested run directories (those holding their own
/// manifest).
pub fn digest_tree(dir: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out)?;
    Ok(out)
}

fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, String>) -> Result<()> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .collect();
    entries.sort();
    for p in entries {
        if p.is_dir() {
            if p.join(MANIFEST).exists() {
                continue;
            }
            walk(root, &p, out)?;
        } else {
            let rel = p.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
            if rel == MANIFEST {
                continue;
            }
            let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
            out.insert(rel, sha256_hex(&bytes));
        }
    }
    Ok(())
}

impl RunManifest {
    pub fn build(dir: &Path, config_text: &str, started: f64) -> Result<Self> {
        Ok(RunManifest {
            config_sha256: sha256_hex(config_text.as_bytes()),
            code_version: CODE_VERSION.to_string(),
            started,
            finished: now(),
            files: digest_tree(dir)?,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let p = dir.join(MANIFEST);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&p, text + "\n").map_err(|e| Error::io(p, e))
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let p = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: p,
            msg: e.to_string(),
        })
    }

    /// Files whose digest differs from the manifest, that are missing, or
    /// that are not listed.
    pub fn check(&self, dir: &Path) -> Result<Vec<String>> {
        let now = digest_tree(dir)?;
        let mut bad = Vec::new();
        for (name, digest) in &self.files {
            match now.get(name) {
                Some(d) if d == digest => {}
                Some(_) => bad.push(format!("{name}: digest mismatch")),
                None => bad.push(format!("{name}: missing")),
            }
        }
        for name in now.keys() {
            if !self.files.contains_key(name) {
                bad.push(format!("{name}: not in manifest"));
            }
        }
        Ok(bad)
    }
}
