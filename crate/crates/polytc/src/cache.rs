//! On-disk cache of enumerations, one JSON file per `n`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use polytc_core::EnumeratedCode;

use crate::batch::enumerate_parallel;
use crate::formats::EnumerationFile;

/// Environment variable naming the cache directory when no flag is given.
pub const CACHE_ENV: &str = "POLYTC_CACHE_DIR";

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// The flag wins over the environment; with neither, nothing is cached.
    pub fn new(flag: Option<PathBuf>) -> Self {
        let dir = flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        Cache { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, n: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("codes-n{n}.json")))
    }

    /// Cached codes for `n`, enumerating and storing them on a miss. A cache
    /// file that fails to parse or whose witnesses disagree is an error
    /// rather than silently replaced.
    pub fn codes(&self, n: usize) -> Result<Vec<EnumeratedCode>> {
        if let Some(path) = self.path(n) {
            if path.exists() {
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let file: EnumerationFile =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                anyhow::ensure!(file.n == n, "{} holds n = {}, not {n}", path.display(), file.n);
                return file.codes().with_context(|| format!("checking {}", path.display()));
            }
        }
        let codes = enumerate_parallel(n)?;
        if let Some(path) = self.path(n) {
            self.store(&path, &EnumerationFile::new(n, &codes))?;
        }
        Ok(codes)
    }

    fn store(&self, path: &Path, file: &EnumerationFile) -> Result<()> {
        let dir = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(file)?).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let first = cache.codes(6).unwrap();
        assert!(cache.path(6).unwrap().exists());
        assert_eq!(cache.codes(6).unwrap(), first);
    }

    #[test]
    fn corrupted_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        fs::write(
            cache.path(5).unwrap(),
            "{\"n\":5,\"codes\":[{\"genes\":[[1,5]],\"signature\":[2],\"witness\":[1,1,1,1,1]}]}",
        )
        .unwrap();
        assert!(cache.codes(5).is_err());
    }
}
