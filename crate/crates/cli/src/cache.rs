//! Column cache on disk: one JSON record per line, keyed by `(e|s|μ)`.
//! Records are only ever appended; on load a later record for a key wins.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use llt_core::{CanonicalBasis, ColumnKey, FockVector, LaurentPoly, Multipartition};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache {path}, line {line}: {msg}")]
    Record { path: PathBuf, line: usize, msg: String },
}

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    column: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    lambda: Multipartition,
    coeff: LaurentPoly,
}

pub struct ColumnCache {
    path: PathBuf,
    /// What the file holds after last-write-wins, as serialized lines.
    stored: HashMap<String, String>,
}

impl ColumnCache {
    /// Reads the file (a missing file is an empty cache) and seeds `cb`.
    pub fn load(path: &Path, cb: &CanonicalBasis) -> Result<Self, CacheError> {
        let io = |source| CacheError::Io { path: path.to_owned(), source };
        let mut latest: BTreeMap<String, (usize, String)> = BTreeMap::new();
        match File::open(path) {
            Ok(f) => {
                for (idx, line) in BufReader::new(f).lines().enumerate() {
                    let line = line.map_err(io)?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let rec: Record = serde_json::from_str(&line).map_err(|err| CacheError::Record {
                        path: path.to_owned(),
                        line: idx + 1,
                        msg: err.to_string(),
                    })?;
                    latest.insert(rec.key.clone(), (idx + 1, line));
                }
            }
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => {}
            Err(err) => return Err(io(err)),
        }

        let mut stored = HashMap::new();
        for (key_text, (line_no, line)) in latest {
            let bad = |msg: String| CacheError::Record { path: path.to_owned(), line: line_no, msg };
            let rec: Record = serde_json::from_str(&line).map_err(|err| bad(err.to_string()))?;
            let key: ColumnKey = key_text.parse().map_err(|err: llt_core::Error| bad(err.to_string()))?;
            let mut col = FockVector::zero(key.multicharge());
            for t in rec.column {
                col.add_term(t.lambda, &t.coeff);
            }
            cb.insert_column(key, col).map_err(|err| bad(err.to_string()))?;
            stored.insert(key_text, line);
        }
        Ok(ColumnCache { path: path.to_owned(), stored })
    }

    /// Appends every column of `cb` that the file does not already hold.
    pub fn save(&mut self, cb: &CanonicalBasis) -> Result<usize, CacheError> {
        let mut fresh: Vec<(String, String)> = cb
            .snapshot()
            .into_iter()
            .filter_map(|(key, col)| {
                let key_text = key.to_string();
                let line = encode(&key_text, &col);
                (self.stored.get(&key_text) != Some(&line)).then_some((key_text, line))
            })
            .collect();
        if fresh.is_empty() {
            return Ok(0);
        }
        fresh.sort();
        let io = |source| CacheError::Io { path: self.path.clone(), source };
        let f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        let mut w = BufWriter::new(f);
        for (_, line) in &fresh {
            writeln!(w, "{line}").map_err(io)?;
        }
        w.flush().map_err(io)?;
        let n = fresh.len();
        self.stored.extend(fresh);
        Ok(n)
    }
}

fn encode(key: &str, col: &FockVector) -> String {
    let column = col
        .sorted_terms()
        .into_iter()
        .map(|(lam, c)| Term { lambda: lam.clone(), coeff: c.clone() })
        .collect();
    serde_json::to_string(&Record { key: key.to_owned(), column }).expect("column serializes")
}
