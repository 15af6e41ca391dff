//! Append-only CSV cache of `Q(m)` values, header `m,q,method`.
//!
//! Rows are keyed by `(m, method)`. A repeated key must repeat its value,
//! and the closed-form and oracle values for the same `m` must agree; any
//! disagreement is reported as corruption.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::local_invariants::{Method, QSample};
use crate::{Error, Result};

pub const HEADER: [&str; 3] = ["m", "q", "method"];

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    m: u32,
    q: u64,
    method: Method,
}

#[derive(Debug)]
pub struct QCache {
    path: PathBuf,
    entries: BTreeMap<(u32, Method), u64>,
}

impl QCache {
    /// Opens the cache at `path`. A missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = QCache {
            path: path.clone(),
            entries: BTreeMap::new(),
        };
        if !path.exists() {
            return Ok(cache);
        }
        let mut reader = csv::Reader::from_path(&path)?;
        let header = reader.headers()?.clone();
        if header.iter().ne(HEADER) {
            return Err(cache.corrupt(format!(
                "expected header m,q,method, found {}",
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        for row in reader.deserialize::<Row>() {
            let row = row?;
            cache.check(row.m, row.method, row.q)?;
            cache.entries.insert((row.m, row.method), row.q);
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, m: u32, method: Method) -> Option<QSample> {
        self.entries
            .get(&(m, method))
            .map(|&q| QSample { m, q, method })
    }

    /// Validates `sample` against what is cached and appends it if new.
    pub fn record(&mut self, sample: QSample) -> Result<()> {
        self.check(sample.m, sample.method, sample.q)?;
        if self.entries.contains_key(&(sample.m, sample.method)) {
            return Ok(());
        }
        let fresh = !self.path.exists() || std::fs::metadata(&self.path)?.len() == 0;
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut writer = csv::WriterBuilder::new()
            .has_headers(fresh)
            .from_writer(file);
        writer.serialize(Row {
            m: sample.m,
            q: sample.q,
            method: sample.method,
        })?;
        writer.flush()?;
        self.entries.insert((sample.m, sample.method), sample.q);
        Ok(())
    }

    fn check(&self, m: u32, method: Method, q: u64) -> Result<()> {
        let same_m = self
            .entries
            .range((m, Method::ClosedForm)..=(m, Method::RankOracle));
        for (&(_, other_method), &cached) in same_m {
            if cached != q {
                return Err(Error::CacheMismatch {
                    m,
                    method: if other_method == method {
                        method.to_string()
                    } else {
                        format!("{other_method} vs {method}")
                    },
                    cached,
                    computed: q,
                });
            }
        }
        Ok(())
    }

    fn corrupt(&self, reason: String) -> Error {
        Error::Cache {
            path: self.path.display().to_string(),
            reason,
        }
    }
}
