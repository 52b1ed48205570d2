//! Append-only JSON-lines result cache, shared between processes through
//! advisory file locks.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const CACHE_ENV: &str = "ZSRING_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    value: Value,
    timestamp: u64,
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()).map(Cache::new)
    }

    /// Key for one computation; the engine version invalidates old entries.
    pub fn key(command: &str, ring: &str, psi: &str, args: &str) -> String {
        format!("{}|{command}|{ring}|{psi}|{args}", zsring::ENGINE_VERSION)
    }

    pub fn get(&self, key: &str) -> Result<Option<Value>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        file.lock_shared()?;
        for line in BufReader::new(&file).lines() {
            // a torn or foreign line is skipped, not fatal
            if let Ok(entry) = serde_json::from_str::<Entry>(&line?) {
                if entry.key == key {
                    return Ok(Some(entry.value));
                }
            }
        }
        Ok(None)
    }

    pub fn put(&self, key: &str, value: &Value) -> Result<()> {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let mut line = serde_json::to_string(&Entry { key: key.to_string(), value: value.clone(), timestamp })?;
        line.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.lock()?;
        file.write_all(line.as_bytes())?;
        Ok(())
    }

    /// Looks `key` up, otherwise computes and stores the value when `keep` says so.
    pub fn fetch(
        cache: Option<&Cache>,
        key: &str,
        compute: impl FnOnce() -> Result<Value>,
        keep: impl FnOnce(&Value) -> bool,
    ) -> Result<Value> {
        if let Some(c) = cache {
            if let Some(v) = c.get(key)? {
                return Ok(v);
            }
        }
        let v = compute()?;
        if let Some(c) = cache {
            if keep(&v) {
                c.put(key, &v)?;
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("c.jsonl"));
        assert_eq!(cache.get("k").unwrap(), None);
        cache.put("k", &json!({"b": 1, "a": [2]})).unwrap();
        cache.put("j", &json!(3)).unwrap();
        assert_eq!(cache.get("k").unwrap(), Some(json!({"a": [2], "b": 1})));
        assert_eq!(cache.get("j").unwrap(), Some(json!(3)));
        let mut calls = 0;
        let v = Cache::fetch(
            Some(&cache),
            "j",
            || {
                calls += 1;
                Ok(json!(4))
            },
            |_| true,
        )
        .unwrap();
        assert_eq!((v, calls), (json!(3), 0));
    }
}
