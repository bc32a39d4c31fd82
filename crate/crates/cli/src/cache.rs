//! One JSON file per search result under the cache directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sumsetlab::search::{CacheKey, ExactCache};
use sumsetlab::ExactResult;

/// Bump when the stored layout or the search semantics change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    schema_version: u32,
    key: CacheKey,
    node_limit: Option<u64>,
    result: ExactResult,
}

pub struct FileCache {
    dir: PathBuf,
}

impl FileCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(FileCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        let factors: Vec<String> = key.factors.iter().map(|d| d.to_string()).collect();
        // C and c must not collide on case-insensitive file systems
        let claim = match key.claim.as_str() {
            "C" => "incomplete",
            "Z" => "zero_sum_free",
            "c" => "unrestricted",
            other => other,
        };
        self.dir
            .join(format!("{}_{claim}_{}.json", factors.join("-"), key.param))
    }
}

impl ExactCache for FileCache {
    fn load(&self, key: &CacheKey, node_limit: Option<u64>) -> Option<ExactResult> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        let entry: Entry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(err) => {
                eprintln!(
                    "warning: ignoring corrupt cache entry {}: {err}",
                    path.display()
                );
                return None;
            }
        };
        if entry.schema_version != SCHEMA_VERSION || &entry.key != key {
            return None;
        }
        if entry.result.is_complete() {
            return Some(entry.result);
        }
        // a partial result is only good enough if we would stop at least as early
        match (node_limit, entry.node_limit) {
            (Some(wanted), Some(stored)) if wanted <= stored => Some(entry.result),
            _ => None,
        }
    }

    fn store(&self, key: &CacheKey, node_limit: Option<u64>, result: &ExactResult) {
        let entry = Entry {
            schema_version: SCHEMA_VERSION,
            key: key.clone(),
            node_limit,
            result: result.clone(),
        };
        let path = self.path_for(key);
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string_pretty(&entry).expect("entries serialize");
        if let Err(err) = fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, &path)) {
            eprintln!(
                "warning: could not write cache entry {}: {err}",
                path.display()
            );
        }
    }
}
