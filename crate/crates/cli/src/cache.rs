//! On-disk report cache keyed by a SHA-256 of the normalised request.

use std::path::PathBuf;

use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "HURWITZ_CACHE_DIR";

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Key of a request document. `serde_json` maps are sorted, so equal
/// requests serialise identically.
pub fn key(request: &Value) -> String {
    digest(serde_json::to_string(request).expect("json values serialise").as_bytes())
}

#[derive(Clone, Debug)]
pub struct Cache {
    pub dir: PathBuf,
}

impl Cache {
    /// `explicit`, else `$HURWITZ_CACHE_DIR`, else the user cache directory.
    pub fn locate(explicit: Option<PathBuf>) -> Option<Cache> {
        let dir = explicit
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("hurwitz")))
            .or_else(|| std::env::var_os("HOME").map(|d| PathBuf::from(d).join(".cache").join("hurwitz")))?;
        Some(Cache { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored document, or `None` when absent or unreadable.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, doc: &Value) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, serde_json::to_string(doc).expect("json values serialise"))?;
        std::fs::rename(tmp, self.path(key))
    }
}
