use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Results stored under the SHA-256 of the canonical job description.
pub struct Cache {
    dir: PathBuf,
}

pub fn key(job: &Value) -> String {
    // serde_json maps are sorted, so this string is canonical
    let text = serde_json::to_string(job).unwrap_or_default();
    let digest = Sha256::digest(text.as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest.iter() {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

impl Cache {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, job: &Value) -> PathBuf {
        self.dir.join(format!("{}.json", key(job)))
    }

    pub fn get(&self, job: &Value) -> Result<Option<Value>> {
        let p = self.path(job);
        if !p.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(p)?;
        Ok(Some(serde_json::from_str(&text)?))
    }

    pub fn put(&self, job: &Value, result: &Value) -> Result<()> {
        let p = self.path(job);
        let tmp = p.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(result)?)?;
        std::fs::rename(tmp, p)?;
        Ok(())
    }
}
