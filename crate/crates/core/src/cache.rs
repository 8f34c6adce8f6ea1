//! Append-only JSON-lines store of computed records.
//!
//! A record is found again by `(kind, fingerprint, params)`. Each record is
//! written with a single `write_all` of one line in append mode, and readers
//! skip lines that do not parse (a concurrent append in progress).

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::jacobi::Fingerprint;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Jacobi,
    Lpoly,
    Structure,
    Scan,
    Congruence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema_version: u32,
    pub kind: RecordKind,
    /// Setup fingerprint; absent for records that depend on `p` alone.
    pub fingerprint: Option<Fingerprint>,
    pub params: Value,
    pub payload: Value,
    /// Seconds since the Unix epoch at creation.
    pub timestamp: u64,
}

impl CacheRecord {
    pub fn new(kind: RecordKind, fingerprint: Option<Fingerprint>, params: Value, payload: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        CacheRecord { schema_version: SCHEMA_VERSION, kind, fingerprint, params, payload, timestamp }
    }

    fn matches(&self, kind: RecordKind, fingerprint: Option<&Fingerprint>, params: &Value) -> bool {
        self.schema_version == SCHEMA_VERSION
            && self.kind == kind
            && self.fingerprint.as_ref() == fingerprint
            && &self.params == params
    }
}

pub struct Cache {
    path: PathBuf,
    writer: Mutex<()>,
}

impl Cache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Cache { path, writer: Mutex::new(()) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All parseable records with their raw lines, in file order.
    pub fn records(&self) -> Result<Vec<(CacheRecord, String)>> {
        let file = File::open(&self.path)?;
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if let Ok(rec) = serde_json::from_str::<CacheRecord>(&line) {
                out.push((rec, line));
            }
        }
        Ok(out)
    }

    /// First record under the key, with the exact line it was stored as.
    pub fn lookup(&self, kind: RecordKind, fingerprint: Option<&Fingerprint>, params: &Value) -> Result<Option<(CacheRecord, String)>> {
        Ok(self.records()?.into_iter().find(|(r, _)| r.matches(kind, fingerprint, params)))
    }

    /// Appends a record and returns the line written.
    pub fn append(&self, record: &CacheRecord) -> Result<String> {
        let line = serde_json::to_string(record)?;
        let _guard = self.writer.lock().expect("cache writer poisoned");
        let mut file = OpenOptions::new().append(true).open(&self.path)?;
        file.write_all(format!("{line}\n").as_bytes())?;
        Ok(line)
    }

    /// Cached line for the key, or the line of a freshly computed record.
    pub fn get_or_insert_with(
        &self,
        kind: RecordKind,
        fingerprint: Option<Fingerprint>,
        params: Value,
        compute: impl FnOnce() -> Result<Value>,
    ) -> Result<(String, bool)> {
        if let Some((_, line)) = self.lookup(kind, fingerprint.as_ref(), &params)? {
            return Ok((line, true));
        }
        let record = CacheRecord::new(kind, fingerprint, params, compute()?);
        Ok((self.append(&record)?, false))
    }
}
