//! Content-addressed result cache.
//!
//! Entries live in `<root>/entries/<key>.json`; unreadable entries are moved to
//! `<root>/quarantine/` and treated as misses.

use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::output::atomic_write;

pub const CACHE_ENV: &str = "AQEC_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".aqec-cache";

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Everything a cached analysis result depends on.
#[derive(Clone, Debug, Serialize)]
pub struct CacheKey<'a> {
    pub tool_version: &'a str,
    pub task: &'a str,
    pub code: String,
    pub region: &'a [usize],
    pub ell: f64,
    pub budget: &'a aqec::engine::SearchBudget,
}

impl CacheKey<'_> {
    pub fn digest(&self) -> Result<String> {
        Ok(digest(&serde_json::to_vec(self)?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub tool_version: String,
    pub code_fingerprint: String,
    pub region: Vec<usize>,
    pub ell: f64,
    pub created_unix: u64,
    pub payload: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CacheStats {
    pub root: String,
    pub entries: usize,
    pub bytes: u64,
    pub quarantined: usize,
    pub listing: Vec<EntrySummary>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntrySummary {
    pub code_fingerprint: String,
    pub region: Vec<usize>,
    pub ell: f64,
    pub key: String,
}

pub struct Cache {
    root: PathBuf,
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn from_env() -> Self {
        Cache::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_CACHE_DIR.into()))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn entries_dir(&self) -> PathBuf {
        self.root.join("entries")
    }

    fn quarantine_dir(&self) -> PathBuf {
        self.root.join("quarantine")
    }

    fn entry_path(&self, key: &str) -> PathBuf {
        self.entries_dir().join(format!("{key}.json"))
    }

    fn quarantine(&self, path: &Path, why: &str) {
        eprintln!("warning: quarantining cache entry {}: {why}", path.display());
        let dest = self.quarantine_dir();
        let moved = std::fs::create_dir_all(&dest)
            .and_then(|_| std::fs::rename(path, dest.join(path.file_name().unwrap_or_default())));
        if moved.is_err() {
            let _ = std::fs::remove_file(path);
        }
    }

    fn read_entry(&self, path: &Path) -> Option<CacheEntry> {
        let bytes = std::fs::read(path).ok()?;
        match serde_json::from_slice::<CacheEntry>(&bytes) {
            Ok(e) if path.file_stem().and_then(|s| s.to_str()) == Some(e.key.as_str()) => Some(e),
            Ok(_) => {
                self.quarantine(path, "key does not match file name");
                None
            }
            Err(err) => {
                self.quarantine(path, &err.to_string());
                None
            }
        }
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let path = self.entry_path(key);
        if !path.exists() {
            return None;
        }
        self.read_entry(&path).map(|e| e.payload)
    }

    pub fn put(&self, key: &str, fingerprint: &str, region: &[usize], ell: f64, payload: &str) -> Result<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            tool_version: crate::TOOL_VERSION.to_string(),
            code_fingerprint: fingerprint.to_string(),
            region: region.to_vec(),
            ell,
            created_unix: now_unix(),
            payload: payload.to_string(),
        };
        atomic_write(&self.entry_path(key), &serde_json::to_vec(&entry)?)
    }

    fn entry_files(&self) -> Result<Vec<PathBuf>> {
        let dir = self.entries_dir();
        if !dir.exists() {
            return Ok(vec![]);
        }
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        Ok(files)
    }

    pub fn stats(&self) -> Result<CacheStats> {
        let mut stats = CacheStats { root: self.root.display().to_string(), ..Default::default() };
        for path in self.entry_files()? {
            let Some(e) = self.read_entry(&path) else { continue };
            stats.entries += 1;
            stats.bytes += std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
            stats.listing.push(EntrySummary { code_fingerprint: e.code_fingerprint, region: e.region, ell: e.ell, key: e.key });
        }
        stats.listing.sort_by(|a, b| {
            (&a.code_fingerprint, &a.region, a.ell.to_bits()).cmp(&(&b.code_fingerprint, &b.region, b.ell.to_bits()))
        });
        if self.quarantine_dir().exists() {
            stats.quarantined = std::fs::read_dir(self.quarantine_dir())?.count();
        }
        Ok(stats)
    }

    /// Removes entries at least `max_age` old (all of them when zero). Returns how many went.
    pub fn gc(&self, max_age: Duration) -> Result<usize> {
        let now = now_unix();
        let mut removed = 0;
        for path in self.entry_files()? {
            let stale = match self.read_entry(&path) {
                Some(e) => now.saturating_sub(e.created_unix) >= max_age.as_secs(),
                None => continue,
            };
            if stale {
                std::fs::remove_file(&path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_get_stats_gc() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert_eq!(cache.stats().unwrap().entries, 0);
        assert!(cache.get("abc").is_none());
        cache.put("abc", "f1", &[0, 2], 4.0, "{\"x\":1}").unwrap();
        cache.put("abd", "f0", &[1], 1.0, "{}").unwrap();
        assert_eq!(cache.get("abc").as_deref(), Some("{\"x\":1}"));
        let st = cache.stats().unwrap();
        assert_eq!(st.entries, 2);
        assert_eq!(st.listing[0].code_fingerprint, "f0");
        assert_eq!(cache.gc(Duration::from_secs(3600)).unwrap(), 0);
        assert_eq!(cache.gc(Duration::ZERO).unwrap(), 2);
        assert_eq!(cache.stats().unwrap().entries, 0);
    }

    #[test]
    fn corrupt_entries_are_quarantined() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.put("good", "f", &[], 0.0, "p").unwrap();
        std::fs::write(dir.path().join("entries/bad.json"), b"{ not json").unwrap();
        std::fs::write(dir.path().join("entries/renamed.json"), std::fs::read(dir.path().join("entries/good.json")).unwrap())
            .unwrap();
        assert!(cache.get("bad").is_none());
        let st = cache.stats().unwrap();
        assert_eq!((st.entries, st.quarantined), (1, 2));
        assert!(!dir.path().join("entries/bad.json").exists());
    }

    #[test]
    fn key_digests_depend_on_every_field() {
        let b = aqec::engine::SearchBudget::quick(1);
        let k = CacheKey { tool_version: "1", task: "analyze", code: "c".into(), region: &[0], ell: 1.0, budget: &b };
        let d = k.digest().unwrap();
        assert_eq!(d.len(), 64);
        assert_ne!(d, CacheKey { ell: 2.0, ..k.clone() }.digest().unwrap());
        assert_ne!(d, CacheKey { region: &[1], ..k.clone() }.digest().unwrap());
        assert_ne!(d, CacheKey { tool_version: "2", ..k }.digest().unwrap());
    }
}
