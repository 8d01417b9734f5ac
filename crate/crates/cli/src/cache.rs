//! Content-addressed result cache with atomic writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use asf_core::asf_engine::ENGINE_VERSION;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    engine_version: String,
    created_unix: u64,
    payload: T,
}

/// `ASF_CACHE_DIR`, else `$HOME/.cache/asf-lab`.
pub fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("ASF_CACHE_DIR") {
        return Some(PathBuf::from(d));
    }
    std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache").join("asf-lab"))
}

/// Hex SHA-256 of the engine version, the job kind and the canonical JSON of its inputs.
pub fn key<I: Serialize>(kind: &str, inputs: &I) -> String {
    let mut h = Sha256::new();
    h.update(ENGINE_VERSION.as_bytes());
    h.update([0]);
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(inputs).expect("serializable inputs"));
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(&key[..2]).join(format!("{key}.json")))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let env: Envelope<T> = serde_json::from_str(&text).ok()?;
        (env.engine_version == ENGINE_VERSION).then_some(env.payload)
    }

    pub fn put<T: Serialize>(&self, key: &str, payload: &T) -> std::io::Result<()> {
        let Some(path) = self.path(key) else { return Ok(()) };
        let dir = path.parent().expect("cache entries live in a shard directory");
        fs::create_dir_all(dir)?;
        let env = Envelope {
            engine_version: ENGINE_VERSION.to_string(),
            created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            payload,
        };
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&serde_json::to_vec_pretty(&env)?)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)
    }

    /// Cached value for `(kind, inputs)`, computing and storing it on a miss.
    pub fn fetch<I, T, E>(&self, kind: &str, inputs: &I, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        I: Serialize,
        T: Serialize + DeserializeOwned,
    {
        let k = key(kind, inputs);
        if let Some(v) = self.get(&k) {
            return Ok(v);
        }
        let v = compute()?;
        if let Err(e) = self.put(&k, &v) {
            eprintln!("warning: cache write failed: {e}");
        }
        Ok(v)
    }
}
