//! Persistent store for bounds results, one JSON object per line.
//!
//! ```text
//! {"format":"bounds-cache","version":1}
//! {"key":"[7]","r":17}
//! {"at_r":17,"key":"[7]","n1":"125","n2":"20376"}
//! ```
//!
//! Entries are append-only and never rewritten. The file is locked for the
//! lifetime of a [`BoundsCache`].

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const FORMAT: &str = "bounds-cache";
pub const VERSION: u64 = 1;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "QATIC_CACHE";

/// `$QATIC_CACHE`, else `<user cache dir>/qatic/bounds.jsonl`.
pub fn default_cache_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()) {
        return Some(PathBuf::from(p));
    }
    dirs::cache_dir().map(|d| d.join("qatic").join("bounds.jsonl"))
}

#[derive(Debug)]
pub struct BoundsCache {
    path: PathBuf,
    file: File,
    r: HashMap<String, i128>,
    n: HashMap<(String, i128), (BigInt, BigInt)>,
}

fn header() -> Value {
    json!({ "format": FORMAT, "version": VERSION })
}

impl BoundsCache {
    /// Opens or creates the cache at `path`, waiting for the file lock.
    /// Any malformed line is reported as [`Error::Cache`].
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let fail = |message: String| Error::Cache {
            path: path.clone(),
            message,
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| fail(e.to_string()))?;
        }
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(|e| fail(e.to_string()))?;
        file.lock().map_err(|e| fail(format!("cannot lock: {e}")))?;
        let mut text = String::new();
        file.read_to_string(&mut text)
            .map_err(|e| fail(e.to_string()))?;
        let mut cache = BoundsCache {
            path: path.clone(),
            file,
            r: HashMap::new(),
            n: HashMap::new(),
        };
        if text.is_empty() {
            cache.append(&header())?;
            return Ok(cache);
        }
        if !text.ends_with('\n') {
            return Err(fail("truncated final line".into()));
        }
        for (i, line) in text.lines().enumerate() {
            let value: Value = serde_json::from_str(line)
                .map_err(|e| fail(format!("line {}: {e}", i + 1)))?;
            if i == 0 {
                if value != header() {
                    return Err(fail(format!("unsupported header {line}")));
                }
                continue;
            }
            cache
                .load_entry(&value)
                .map_err(|m| fail(format!("line {}: {m}", i + 1)))?;
        }
        Ok(cache)
    }

    fn load_entry(&mut self, v: &Value) -> std::result::Result<(), String> {
        let obj = v.as_object().ok_or("entry is not an object")?;
        let key = obj
            .get("key")
            .and_then(Value::as_str)
            .ok_or("missing key")?
            .to_string();
        let int = |field: &str| -> std::result::Result<i128, String> {
            obj.get(field)
                .and_then(Value::as_i64)
                .map(i128::from)
                .ok_or_else(|| format!("missing or non-integer {field}"))
        };
        let big = |field: &str| -> std::result::Result<BigInt, String> {
            obj.get(field)
                .and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| format!("missing or non-decimal {field}"))
        };
        let conflict = || format!("conflicting duplicate entry for {key}");
        match obj.len() {
            2 if obj.contains_key("r") => {
                let r = int("r")?;
                if self.r.get(&key).is_some_and(|&old| old != r) {
                    return Err(conflict());
                }
                self.r.insert(key, r);
            }
            4 => {
                let at = int("at_r")?;
                let pair = (big("n1")?, big("n2")?);
                let slot = (key.clone(), at);
                if self.n.get(&slot).is_some_and(|old| *old != pair) {
                    return Err(conflict());
                }
                self.n.insert(slot, pair);
            }
            _ => return Err("unrecognised entry".into()),
        }
        Ok(())
    }

    fn append(&mut self, v: &Value) -> Result<()> {
        let line = format!("{v}\n");
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| Error::Cache {
                path: self.path.clone(),
                message: e.to_string(),
            })
    }

    fn conflict(&self, key: &str) -> Error {
        Error::Cache {
            path: self.path.clone(),
            message: format!("stored value for {key} differs from the computed one"),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.r.len() + self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_r(&self, key: &str) -> Option<i128> {
        self.r.get(key).copied()
    }

    pub fn get_n(&self, key: &str, at_r: i128) -> Option<&(BigInt, BigInt)> {
        self.n.get(&(key.to_string(), at_r))
    }

    fn json_int(&self, x: i128) -> Result<Value> {
        i64::try_from(x).map(Value::from).map_err(|_| Error::Cache {
            path: self.path.clone(),
            message: format!("{x} does not fit a cache entry"),
        })
    }

    /// Records `r(key)`; true if a new line was written.
    pub fn put_r(&mut self, key: &str, r: i128) -> Result<bool> {
        match self.r.get(key) {
            Some(&old) if old == r => return Ok(false),
            Some(_) => return Err(self.conflict(key)),
            None => {}
        }
        let line = json!({ "key": key, "r": self.json_int(r)? });
        self.append(&line)?;
        self.r.insert(key.to_string(), r);
        Ok(true)
    }

    /// Records `n_1(key, at_r)` and `n_2(key, at_r)`; true if a new line was
    /// written.
    pub fn put_n(&mut self, key: &str, at_r: i128, n1: &BigInt, n2: &BigInt) -> Result<bool> {
        let slot = (key.to_string(), at_r);
        match self.n.get(&slot) {
            Some(old) if old.0 == *n1 && old.1 == *n2 => return Ok(false),
            Some(_) => return Err(self.conflict(key)),
            None => {}
        }
        let line = json!({
            "key": key,
            "at_r": self.json_int(at_r)?,
            "n1": n1.to_string(),
            "n2": n2.to_string(),
        });
        self.append(&line)?;
        self.n.insert(slot, (n1.clone(), n2.clone()));
        Ok(true)
    }
}
