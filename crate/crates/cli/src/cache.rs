//! Content-addressed store for per-block results.
//!
//! A key is the SHA-256 of the computation name, its parameters and the core
//! version, so results never outlive the code that produced them.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub struct BlockCache {
    dir: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl BlockCache {
    pub fn new(dir: PathBuf) -> Self {
        Self {
            dir,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        h.update(qdiag_core::VERSION.as_bytes());
        for p in parts {
            h.update([0u8]);
            h.update(p.as_bytes());
        }
        format!("{:x}", h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored value; unreadable or stale entries count as misses.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let v = fs::read(self.path(key))
            .ok()
            .and_then(|b| serde_json::from_slice(&b).ok());
        let counter = if v.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        v
    }

    /// Writes through a temporary file so concurrent readers never see a partial entry.
    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(tmp, self.path(key))
    }

    /// Returns the cached value or computes and stores it.
    pub fn get_or_compute<T, E>(&self, key: &str, f: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
        E: From<std::io::Error>,
    {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = f()?;
        self.put(key, &v)?;
        Ok(v)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_counts() {
        let dir = tempfile::tempdir().unwrap();
        let c = BlockCache::new(dir.path().to_path_buf());
        let k = BlockCache::key(&["demo", "1"]);
        assert_ne!(k, BlockCache::key(&["demo", "2"]));
        assert_eq!(c.get::<Vec<u32>>(&k), None);
        let v: Result<Vec<u32>, std::io::Error> = c.get_or_compute(&k, || Ok(vec![1, 2]));
        assert_eq!(v.unwrap(), vec![1, 2]);
        let again: Result<Vec<u32>, std::io::Error> = c.get_or_compute(&k, || panic!("cached"));
        assert_eq!(again.unwrap(), vec![1, 2]);
        assert_eq!((c.hits(), c.misses()), (1, 2));
    }
}
