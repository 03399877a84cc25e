//! On-disk result cache keyed by the SHA-256 of (tool version, space,
//! bracket, task). Entries are exact: scalars are stored in their canonical
//! text form, never as floats.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::run::VERSION;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored result, ignoring unreadable entries and other tool versions.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        (v["version"] == VERSION).then(|| v["result"].clone())
    }

    /// Writes through a temporary file and a rename, so concurrent readers
    /// never see a partial entry. Failures only cost a recomputation.
    pub fn put(&self, key: &str, result: &Value) {
        let body = json!({ "version": VERSION, "result": result }).to_string();
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        if fs::write(&tmp, body).is_ok() && fs::rename(&tmp, self.path(key)).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}
