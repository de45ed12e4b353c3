//! Content-addressed on-disk cache: `<dir>/<digest>/<kind>.dat`.
//!
//! Each file is a header line `fbcache <version> <kind> <sha256 of body>`
//! followed by the body. A file whose header or checksum does not match is
//! treated as absent and reported as a warning.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheKind {
    Gb,
    Resolution,
}

impl CacheKind {
    pub fn name(self) -> &'static str {
        match self {
            CacheKind::Gb => "gb",
            CacheKind::Resolution => "resolution",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheLookup {
    Hit(String),
    Miss,
    /// The entry existed but failed validation; the reason is returned for the warning list.
    Corrupt(String),
}

#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, digest: &str, kind: CacheKind) -> PathBuf {
        self.root.join(digest).join(format!("{}.dat", kind.name()))
    }

    pub fn get(&self, digest: &str, kind: CacheKind) -> CacheLookup {
        let path = self.path(digest, kind);
        let Ok(bytes) = fs::read(&path) else {
            return CacheLookup::Miss;
        };
        let corrupt = |why: &str| CacheLookup::Corrupt(format!("cache entry {} ignored: {why}", path.display()));
        let Ok(text) = String::from_utf8(bytes) else {
            return corrupt("not UTF-8");
        };
        let Some((header, body)) = text.split_once('\n') else {
            return corrupt("missing header");
        };
        let fields: Vec<&str> = header.split(' ').collect();
        match fields.as_slice() {
            ["fbcache", v, k, sum] => {
                if *v != CACHE_VERSION.to_string() {
                    return corrupt("format version mismatch");
                }
                if *k != kind.name() {
                    return corrupt("kind mismatch");
                }
                if *sum != sha256_hex(body.as_bytes()) {
                    return corrupt("checksum mismatch");
                }
                CacheLookup::Hit(body.to_string())
            }
            _ => corrupt("malformed header"),
        }
    }

    /// Writes to a unique temporary name in the target directory, then renames over the entry.
    pub fn put(&self, digest: &str, kind: CacheKind, body: &str) -> std::io::Result<()> {
        let path = self.path(digest, kind);
        let dir = path.parent().expect("entry has a parent");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{}.{}.{}.tmp", kind.name(), std::process::id(), unique_suffix()));
        {
            let mut f = fs::File::create(&tmp)?;
            write!(f, "fbcache {CACHE_VERSION} {} {}\n{body}", kind.name(), sha256_hex(body.as_bytes()))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)
    }
}

fn unique_suffix() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let nanos = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.subsec_nanos()).unwrap_or(0);
    (nanos as u64) << 20 | COUNTER.fetch_add(1, Ordering::Relaxed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        assert_eq!(cache.get("abc", CacheKind::Gb), CacheLookup::Miss);
        cache.put("abc", CacheKind::Gb, "payload\nline two").unwrap();
        assert_eq!(cache.get("abc", CacheKind::Gb), CacheLookup::Hit("payload\nline two".into()));
        assert_eq!(cache.get("abc", CacheKind::Resolution), CacheLookup::Miss);
        let path = cache.path("abc", CacheKind::Gb);
        let mut text = fs::read_to_string(&path).unwrap();
        text.push('x');
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get("abc", CacheKind::Gb), CacheLookup::Corrupt(_)));
        fs::write(&path, "fbcache 0 gb 00\nbody").unwrap();
        assert!(matches!(cache.get("abc", CacheKind::Gb), CacheLookup::Corrupt(_)));
    }
}
