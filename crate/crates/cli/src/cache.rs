//! Content-addressed result store. Entries are written to a temporary file in
//! the cache directory and renamed into place, so readers never observe a
//! partial entry and concurrent writers of one key leave exactly one winner.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "SUPERWEIGHT_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    fingerprint: String,
    value: String,
}

#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(ResultCache { dir })
    }

    /// The explicit directory if given, else `SUPERWEIGHT_CACHE`, else none.
    pub fn resolve(flag: Option<&Path>) -> std::io::Result<Option<Self>> {
        match flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)) {
            Some(d) => Self::new(d).map(Some),
            None => Ok(None),
        }
    }

    /// Key of a JSON query description (serde_json output is deterministic
    /// for structs and ordered maps).
    pub fn key(query: &serde_json::Value) -> String {
        sha256_hex(query.to_string().as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored value, unless absent, unreadable or computed with
    /// different providers.
    pub fn get(&self, key: &str, fingerprint: &str) -> Option<String> {
        let bytes = std::fs::read(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        (entry.fingerprint == fingerprint).then_some(entry.value)
    }

    pub fn put(&self, key: &str, fingerprint: &str, value: &str) -> std::io::Result<()> {
        let entry = Entry { fingerprint: fingerprint.to_string(), value: value.to_string() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry).expect("entry serializes").as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Store raw bytes under a name inside a subdirectory, atomically.
    pub fn put_file(&self, sub: &str, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
        let dir = self.dir.join(sub);
        std::fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        tmp.write_all(bytes)?;
        let path = dir.join(name);
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::new(dir.path()).unwrap();
        let k = ResultCache::key(&serde_json::json!({"q": 1}));
        c.put(&k, "fp", "{\"a\":1}").unwrap();
        assert_eq!(c.get(&k, "fp").as_deref(), Some("{\"a\":1}"));
        assert_eq!(c.get(&k, "other"), None);
    }

    #[test]
    fn concurrent_puts_leave_one_consistent_entry() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::new(dir.path()).unwrap();
        let k = ResultCache::key(&serde_json::json!("same"));
        let values: Vec<String> = (0..8).map(|i| format!("{{\"v\":{}}}", "x".repeat(1000 * (i + 1)))).collect();
        std::thread::scope(|s| {
            for v in &values {
                let c = c.clone();
                let k = k.clone();
                s.spawn(move || {
                    c.put(&k, "fp", v).unwrap();
                    let got = c.get(&k, "fp").unwrap();
                    assert!(values_contains(&got));
                });
            }
        });
        fn values_contains(s: &str) -> bool {
            (1..=8).any(|i| s == format!("{{\"v\":{}}}", "x".repeat(1000 * i)))
        }
        let left: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(left.len(), 1);
    }
}
