//! On-disk Hom cache, enabled by `STRATAKIT_CACHE_DIR`.
//!
//! One versioned JSON file per directory. Entries are only ever added; a
//! stored entry that disagrees with a fresh computation is an internal
//! consistency failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_FILE: &str = "hom-cache.json";
pub const CACHE_ENV: &str = "STRATAKIT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomEntry {
    pub dim: usize,
    /// Basis paths as arrow keys.
    pub basis: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: BTreeMap<String, HomEntry>,
}

#[derive(Debug, Default)]
pub struct HomCache {
    file: Option<PathBuf>,
    entries: BTreeMap<String, HomEntry>,
    dirty: bool,
}

impl HomCache {
    /// The cache named by the environment, or an in-memory one.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::open(Path::new(&dir)),
            _ => Ok(Self::default()),
        }
    }

    /// Files written by another format version are ignored and replaced on save.
    pub fn open(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        let file = dir.join(CACHE_FILE);
        let entries = match fs::read_to_string(&file) {
            Ok(text) => match serde_json::from_str::<CacheFile>(&text) {
                Ok(c) if c.version == CACHE_VERSION => c.entries,
                _ => BTreeMap::new(),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(HomCache { file: Some(file), entries, dirty: false })
    }

    pub fn get(&self, key: &str) -> Option<&HomEntry> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: String, entry: HomEntry) -> Result<(), CliError> {
        match self.entries.get(&key) {
            Some(old) if *old != entry => {
                Err(strata_core::Error::Inconsistent(format!("cached Hom for {key} differs from a fresh computation")).into())
            }
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, entry);
                self.dirty = true;
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes through a temporary file so readers never see a torn cache.
    pub fn save(&mut self) -> Result<(), CliError> {
        let Some(file) = &self.file else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        let body = CacheFile { version: CACHE_VERSION, entries: self.entries.clone() };
        let tmp = file.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&body)?)?;
        fs::rename(&tmp, file)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persists_and_rejects_conflicts() {
        let dir = tempfile::tempdir().unwrap();
        let e = HomEntry { dim: 1, basis: vec![vec!["a@0".into()]] };
        let mut c = HomCache::open(dir.path()).unwrap();
        c.insert("k".into(), e.clone()).unwrap();
        c.save().unwrap();
        let mut again = HomCache::open(dir.path()).unwrap();
        assert_eq!(again.get("k"), Some(&e));
        assert!(again.insert("k".into(), HomEntry { dim: 0, basis: vec![] }).is_err());
    }

    #[test]
    fn other_versions_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(CACHE_FILE), r#"{"version":0,"entries":{"k":{"dim":3,"basis":[]}}}"#).unwrap();
        assert!(HomCache::open(dir.path()).unwrap().is_empty());
    }
}
