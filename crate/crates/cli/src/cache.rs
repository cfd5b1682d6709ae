//! Persistent Kloosterman cache in JSON-lines form.
//!
//! The first line is a header record carrying the format version; every later
//! line holds one `(n, m, c, value)` entry. Keys use the symmetries
//! `S(n, m, c) = S(m, n, c) = S(n, m, -c)`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use pgt_core::kloosterman::{kloosterman_sum_fast, KloostermanError, KloostermanSource};
use pgt_core::GaussianInt;
use serde::{Deserialize, Serialize};

pub const CACHE_FORMAT: &str = "pgt-kloosterman-cache";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    n: GaussianInt,
    m: GaussianInt,
    c: GaussianInt,
    value: f64,
}

type Key = (GaussianInt, GaussianInt, GaussianInt);

fn canonical_key(n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Key {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    (lo, hi, c.sign_normalized())
}

/// How an existing cache file was treated on open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadOutcome {
    /// No file was present, or no path was given.
    Fresh,
    Loaded(usize),
    /// The header named another format or version; entries were ignored.
    VersionMismatch(String),
    /// A line failed to parse; the cache starts empty and the file is rewritten.
    Corrupt { line: usize },
}

#[derive(Debug)]
pub struct KloostermanCache {
    path: Option<PathBuf>,
    entries: RwLock<BTreeMap<Key, f64>>,
    hits: AtomicU64,
    misses: AtomicU64,
    outcome: LoadOutcome,
}

impl KloostermanCache {
    /// An in-memory cache that is never written.
    pub fn in_memory() -> Self {
        Self {
            path: None,
            entries: RwLock::new(BTreeMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            outcome: LoadOutcome::Fresh,
        }
    }

    /// Opens `path`, falling back to an empty cache if it is missing, stale or corrupt.
    pub fn open(path: &Path) -> Self {
        let mut cache = Self::in_memory();
        cache.path = Some(path.to_path_buf());
        let Ok(text) = fs::read_to_string(path) else {
            return cache;
        };
        let (entries, outcome) = parse(&text);
        *cache.entries.get_mut().expect("fresh lock") = entries;
        cache.outcome = outcome;
        cache
    }

    pub fn outcome(&self) -> &LoadOutcome {
        &self.outcome
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cached value of `S(n, m, c)`, computed and stored on a miss.
    pub fn get_or_compute(&self, n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<f64, KloostermanError> {
        let key = canonical_key(n, m, c);
        if let Some(&v) = self.entries.read().expect("cache lock").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = kloosterman_sum_fast(key.0, key.1, key.2)?.re;
        self.entries.write().expect("cache lock").insert(key, v);
        Ok(v)
    }

    /// Writes the cache back, sorted by key, through a temporary file.
    pub fn save(&self) -> std::io::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut out = String::new();
        let header = Header {
            format: CACHE_FORMAT.into(),
            version: CACHE_VERSION,
        };
        out.push_str(&serde_json::to_string(&header).map_err(std::io::Error::other)?);
        out.push('\n');
        for (&(n, m, c), &value) in self.entries.read().expect("cache lock").iter() {
            let line = serde_json::to_string(&Entry { n, m, c, value }).map_err(std::io::Error::other)?;
            out.push_str(&line);
            out.push('\n');
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(out.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    }
}

fn parse(text: &str) -> (BTreeMap<Key, f64>, LoadOutcome) {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, first)) = lines.next() else {
        return (BTreeMap::new(), LoadOutcome::Fresh);
    };
    match serde_json::from_str::<Header>(first) {
        Ok(h) if h.format == CACHE_FORMAT && h.version == CACHE_VERSION => {}
        Ok(h) => {
            return (BTreeMap::new(), LoadOutcome::VersionMismatch(format!("{} v{}", h.format, h.version)));
        }
        Err(_) => return (BTreeMap::new(), LoadOutcome::Corrupt { line: 1 }),
    }
    let mut entries = BTreeMap::new();
    for (k, line) in lines {
        match serde_json::from_str::<Entry>(line) {
            Ok(e) if e.value.is_finite() => {
                entries.insert(canonical_key(e.n, e.m, e.c), e.value);
            }
            _ => return (BTreeMap::new(), LoadOutcome::Corrupt { line: k + 1 }),
        }
    }
    let count = entries.len();
    (entries, LoadOutcome::Loaded(count))
}

impl KloostermanSource for KloostermanCache {
    fn value(&self, n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<f64, KloostermanError> {
        self.get_or_compute(n, m, c)
    }
}
