//! Tiny JSON-on-disk store for search results that are expensive to
//! recompute (header blocks, shift plans).
//!
//! The cache is strictly an optimization: every consumer re-validates what
//! it loads, so a missing, stale, or corrupt file is indistinguishable from
//! a cache miss. Writes go through a temp file and an atomic rename so a
//! crashed process can never leave a half-written entry.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::Result;

/// Environment variable consulted by [`Cache::default_dir`].
pub const CACHE_DIR_ENV: &str = "MRS_CACHE_DIR";

/// Directory name used when nothing else is configured.
pub const DEFAULT_CACHE_DIR: &str = ".mrs-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// A cache that never hits and never stores.
    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    /// A cache rooted at `dir` (created on first store).
    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: Some(dir.into()) }
    }

    /// Resolution order: explicit override, `MRS_CACHE_DIR`, then
    /// `./.mrs-cache`.
    pub fn default_dir(override_dir: Option<&Path>) -> Cache {
        if let Some(d) = override_dir {
            return Cache::at(d);
        }
        if let Ok(d) = std::env::var(CACHE_DIR_ENV) {
            if !d.is_empty() {
                return Cache::at(d);
            }
        }
        Cache::at(DEFAULT_CACHE_DIR)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        debug_assert!(
            key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_'),
            "cache keys must be simple slugs, got {key:?}"
        );
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// Loads and deserializes an entry; any failure is a miss.
    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let path = self.path_for(key)?;
        let text = std::fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Serializes and stores an entry atomically.
    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let Some(path) = self.path_for(key) else {
            return Ok(());
        };
        let dir = path.parent().expect("cache path has a parent");
        std::fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".tmp-{}-{key}.json", std::process::id()));
        std::fs::write(&tmp, serde_json::to_string_pretty(value)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        assert_eq!(cache.load::<Vec<u64>>("xs"), None);
        cache.store("xs", &vec![1u64, 2, 3]).unwrap();
        assert_eq!(cache.load::<Vec<u64>>("xs"), Some(vec![1, 2, 3]));
    }

    #[test]
    fn corrupt_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        std::fs::write(dir.path().join("bad.json"), "{not json").unwrap();
        assert_eq!(cache.load::<Vec<u64>>("bad"), None);
    }

    #[test]
    fn disabled_cache_never_stores() {
        let cache = Cache::disabled();
        cache.store("k", &1u64).unwrap();
        assert_eq!(cache.load::<u64>("k"), None);
    }

    #[test]
    fn type_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        cache.store("k", &"text").unwrap();
        assert_eq!(cache.load::<Vec<u64>>("k"), None);
    }
}
