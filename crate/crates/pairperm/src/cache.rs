//! Content-addressed cache for diagrams and Gram matrices. Entries are the
//! staged file formats themselves, stored under the SHA-256 of everything
//! that determines their content. Values round-trip exactly, so a hit
//! yields the same bits as recomputing.

use std::cell::Cell;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "PAIRPERM_CACHE";

#[derive(Debug, Default)]
pub struct Cache {
    root: Option<PathBuf>,
    hits: Cell<u64>,
    misses: Cell<u64>,
}

/// SHA-256 over length-prefixed parts, as lowercase hex.
pub fn content_key(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    /// Cache rooted at `$PAIRPERM_CACHE`, or a disabled one when unset.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::at(dir),
            _ => Self::disabled(),
        }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { root: Some(dir.into()), ..Cache::default() }
    }

    pub fn disabled() -> Self {
        Cache::default()
    }

    pub fn enabled(&self) -> bool {
        self.root.is_some()
    }

    pub fn hits(&self) -> u64 {
        self.hits.get()
    }

    pub fn misses(&self) -> u64 {
        self.misses.get()
    }

    fn entry(&self, kind: &str, key: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(kind).join(&key[..2]).join(key))
    }

    /// Path of a stored entry, counting the lookup as a hit or miss.
    pub fn lookup(&self, kind: &str, key: &str) -> Option<PathBuf> {
        let path = self.entry(kind, key)?;
        if path.is_file() {
            self.hits.set(self.hits.get() + 1);
            Some(path)
        } else {
            self.misses.set(self.misses.get() + 1);
            None
        }
    }

    /// Stores `bytes`; written to a temporary name and renamed so readers
    /// never see a partial entry.
    pub fn store(&self, kind: &str, key: &str, bytes: &[u8]) -> Result<()> {
        let Some(path) = self.entry(kind, key) else { return Ok(()) };
        let dir = path.parent().expect("entry has a parent");
        fs::create_dir_all(dir).map_err(|e| Error::write(dir, e))?;
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, bytes).map_err(|e| Error::write(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::write(&path, e))
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }
}
