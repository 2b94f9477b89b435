//! Flat content-addressed cache of survey batches.
//!
//! One file per (family, size, instance-code hash). The first line is a JSON
//! header with the key and a SHA-256 checksum of the rest of the file, which
//! holds the serialized batch. Files are written to a temporary name and
//! renamed, so a batch is either fully present or absent.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file {path} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("cache I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub family: String,
    pub size: usize,
    pub code_hash: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl CacheKey {
    /// Key over the ordered instance codes of one batch.
    pub fn new<S: AsRef<str>>(family: &str, size: usize, codes: &[S]) -> CacheKey {
        let mut hasher = Sha256::new();
        hasher.update(SCHEMA_VERSION.to_le_bytes());
        for code in codes {
            hasher.update(code.as_ref().as_bytes());
            hasher.update(b"\n");
        }
        CacheKey {
            family: family.to_string(),
            size,
            code_hash: hex::encode(hasher.finalize()),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}-{}-{}.json", self.family, self.size, &self.code_hash[..16])
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema: u32,
    key: CacheKey,
    checksum: String,
}

pub fn cache_path(dir: &Path, key: &CacheKey) -> PathBuf {
    dir.join(key.file_name())
}

pub fn cache_store<T: Serialize>(dir: &Path, key: &CacheKey, batch: &T) -> Result<PathBuf, CacheError> {
    fs::create_dir_all(dir)?;
    let body = serde_json::to_vec(batch)?;
    let header = Header {
        schema: SCHEMA_VERSION,
        key: key.clone(),
        checksum: sha256_hex(&body),
    };
    let path = cache_path(dir, key);
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        serde_json::to_writer(&mut f, &header)?;
        f.write_all(b"\n")?;
        f.write_all(&body)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// `Ok(None)` on a miss; `CacheCorrupt` when the file exists but fails its
/// checksum, its key or its schema version.
pub fn cache_load<T: DeserializeOwned>(dir: &Path, key: &CacheKey) -> Result<Option<T>, CacheError> {
    let path = cache_path(dir, key);
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let corrupt = |reason: &str| CacheError::CacheCorrupt {
        path: path.clone(),
        reason: reason.to_string(),
    };
    let split = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| corrupt("missing header line"))?;
    let header: Header = serde_json::from_slice(&bytes[..split]).map_err(|_| corrupt("unreadable header"))?;
    let body = &bytes[split + 1..];
    if header.schema != SCHEMA_VERSION {
        return Err(corrupt("schema version mismatch"));
    }
    if header.key != *key {
        return Err(corrupt("key mismatch"));
    }
    if header.checksum != sha256_hex(body) {
        return Err(corrupt("checksum mismatch"));
    }
    let batch = serde_json::from_slice(body).map_err(|_| corrupt("unreadable body"))?;
    Ok(Some(batch))
}

/// Loads a batch, deleting the file and reporting a miss if it is corrupt.
pub fn cache_load_or_invalidate<T: DeserializeOwned>(dir: &Path, key: &CacheKey) -> Option<T> {
    match cache_load(dir, key) {
        Ok(hit) => hit,
        Err(e) => {
            log::warn!("{e}; recomputing");
            let _ = fs::remove_file(cache_path(dir, key));
            None
        }
    }
}
