use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{analyze, AnalysisRecord, AnalyzeOptions, ENGINE_VERSION};

/// One line of the append-only cache file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub poly: String,
    pub operation: String,
    pub params: AnalyzeOptions,
    pub engine_version: String,
    pub record: AnalysisRecord,
    pub timestamp: u64,
}

/// `sha256(canonical poly, operation, parameters, engine version)`; the
/// worker count is not part of the key since it never changes results.
pub fn cache_key(poly: &str, operation: &str, params: &AnalyzeOptions) -> String {
    let normalized = AnalyzeOptions {
        jobs: 1,
        ..params.clone()
    };
    let mut h = Sha256::new();
    for part in [
        poly,
        operation,
        &serde_json::to_string(&normalized).expect("options serialize"),
        ENGINE_VERSION,
    ] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: HashMap<String, CacheEntry>,
    order: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheVerification {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl Cache {
    /// Opens (or starts) a cache file; unreadable lines are skipped.
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut entries = HashMap::new();
        let mut order = Vec::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if let Ok(e) = serde_json::from_str::<CacheEntry>(&line) {
                    if !entries.contains_key(&e.key) {
                        order.push(e.key.clone());
                    }
                    entries.insert(e.key.clone(), e);
                }
            }
        }
        Ok(Cache {
            path: path.to_path_buf(),
            entries,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&AnalysisRecord> {
        self.entries.get(key).map(|e| &e.record)
    }

    pub fn put(
        &mut self,
        key: &str,
        record: &AnalysisRecord,
        operation: &str,
        params: &AnalyzeOptions,
    ) -> std::io::Result<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            poly: record.poly.clone(),
            operation: operation.to_string(),
            params: params.clone(),
            engine_version: ENGINE_VERSION.to_string(),
            record: record.without_timing(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        serde_json::to_writer(&mut f, &entry)?;
        f.write_all(b"\n")?;
        if !self.entries.contains_key(key) {
            self.order.push(key.to_string());
        }
        self.entries.insert(key.to_string(), entry);
        Ok(())
    }

    /// Recomputes every `stride`-th entry and compares it with the cached value.
    pub fn verify(&self, stride: usize) -> CacheVerification {
        let mut out = CacheVerification::default();
        for key in self.order.iter().step_by(stride.max(1)) {
            let e = &self.entries[key];
            out.checked += 1;
            let same = cache_key(&e.poly, &e.operation, &e.params) == e.key
                && analyze(&e.poly, &e.params)
                    .map(|r| r.without_timing() == e.record)
                    .unwrap_or(false);
            if !same {
                out.mismatches.push(e.poly.clone());
            }
        }
        out
    }
}
