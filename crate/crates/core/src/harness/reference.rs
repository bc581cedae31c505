//! Content-addressed store of reference traces.
//!
//! Each trace lives in `<dir>/<hash>.ref`: one line of JSON header (hash,
//! config, time grid, shape) followed by the samples as little-endian
//! (re, im) f64 pairs, times × points row-major. The hash is SHA-256 of the
//! config text, so re-running a reference with the same config must produce
//! the same bytes.

use crate::error::{Error, Result};
use crate::multiscatter::TraceBlock;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceHeader {
    pub hash: String,
    pub config: String,
    pub t0: f64,
    pub dt: f64,
    pub times: usize,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct ReferenceStore {
    dir: PathBuf,
}

pub fn config_hash(config: &str) -> String {
    hex::encode(Sha256::digest(config.as_bytes()))
}

fn encode(header: &ReferenceHeader, block: &TraceBlock) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec(header)?;
    bytes.push(b'\n');
    for v in &block.data {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    Ok(bytes)
}

fn decode(bytes: &[u8]) -> Result<(ReferenceHeader, TraceBlock)> {
    let bad = |m: &str| Error::Domain(format!("malformed reference file: {m}"));
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| bad("missing header"))?;
    let header: ReferenceHeader = serde_json::from_slice(&bytes[..nl])?;
    let body = &bytes[nl + 1..];
    if body.len() != header.times * header.points * 16 {
        return Err(bad("sample count does not match header"));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let data = body.chunks_exact(16).map(|c| C64::new(f(&c[..8]), f(&c[8..]))).collect();
    Ok((
        header.clone(),
        TraceBlock {
            times: header.times,
            points: header.points,
            data,
        },
    ))
}

impl ReferenceStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(ReferenceStore {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    pub fn path_for(&self, config: &str) -> PathBuf {
        self.dir.join(format!("{}.ref", config_hash(config)))
    }

    /// Stores a trace. An existing entry under the same hash must carry the
    /// same config and identical bytes, otherwise this is a conflict.
    pub fn put(&self, config: &str, t0: f64, dt: f64, block: &TraceBlock) -> Result<PathBuf> {
        let header = ReferenceHeader {
            hash: config_hash(config),
            config: config.to_string(),
            t0,
            dt,
            times: block.times,
            points: block.points,
        };
        let bytes = encode(&header, block)?;
        let path = self.path_for(config);
        if path.exists() {
            let old = fs::read(&path)?;
            let (h, _) = decode(&old)?;
            if h.config != config {
                return Err(Error::ReferenceConflict(format!("hash {} holds a different config", h.hash)));
            }
            if old != bytes {
                return Err(Error::ReferenceConflict(format!(
                    "hash {} was produced with different samples",
                    h.hash
                )));
            }
            return Ok(path);
        }
        let mut f = fs::File::create(&path)?;
        f.write_all(&bytes)?;
        Ok(path)
    }

    pub fn get(&self, config: &str) -> Result<Option<(ReferenceHeader, TraceBlock)>> {
        let path = self.path_for(config);
        if !path.exists() {
            return Ok(None);
        }
        let (h, b) = decode(&fs::read(&path)?)?;
        if h.config != config {
            return Err(Error::ReferenceConflict(format!("hash {} holds a different config", h.hash)));
        }
        Ok(Some((h, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(s: f64) -> TraceBlock {
        TraceBlock {
            times: 3,
            points: 2,
            data: (0..6).map(|k| C64::new(k as f64 * s, -1.0 / (k as f64 + 1.0))).collect(),
        }
    }

    #[test]
    fn round_trip_and_conflicts() {
        let dir = tempfile::tempdir().unwrap();
        let store = ReferenceStore::open(dir.path()).unwrap();
        let cfg = r#"{"geometry":"disc"}"#;
        assert!(store.get(cfg).unwrap().is_none());
        let p = store.put(cfg, -1.0, 0.5, &block(0.1)).unwrap();
        assert!(p.file_name().unwrap().to_str().unwrap().starts_with(&config_hash(cfg)));
        let (h, b) = store.get(cfg).unwrap().unwrap();
        assert_eq!(b, block(0.1));
        assert_eq!((h.t0, h.dt, h.times, h.points), (-1.0, 0.5, 3, 2));
        // same config, same samples: accepted
        store.put(cfg, -1.0, 0.5, &block(0.1)).unwrap();
        assert!(matches!(store.put(cfg, -1.0, 0.5, &block(0.2)), Err(Error::ReferenceConflict(_))));
        // a foreign config sitting under this hash
        let other = r#"{"geometry":"kite"}"#;
        fs::copy(&p, store.path_for(other)).unwrap();
        assert!(matches!(store.get(other), Err(Error::ReferenceConflict(_))));
    }
}
