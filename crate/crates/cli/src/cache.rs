//! Append-only NDJSON cache of completed Case II searches: a header line,
//! then one `Case2Record` per completed `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use polytile_core::families::Case2Record;
use serde::{Deserialize, Serialize};

pub const CACHE_KIND: &str = "case2";
pub const CACHE_SCHEMA: u64 = 1;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Header {
    cache: String,
    schema_version: u64,
    with_e: bool,
}

/// The cache file cannot be used as is.
#[derive(Debug)]
pub struct CorruptCache {
    pub path: PathBuf,
    pub detail: String,
}

impl fmt::Display for CorruptCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cache {} is unusable ({}); delete it and rerun to start fresh",
            self.path.display(),
            self.detail
        )
    }
}

impl std::error::Error for CorruptCache {}

pub struct Case2Cache {
    file: Mutex<File>,
    records: BTreeMap<u64, Case2Record>,
}

impl Case2Cache {
    pub fn open(path: &Path, with_e: bool) -> anyhow::Result<Self> {
        let corrupt = |detail: String| CorruptCache { path: path.to_owned(), detail };
        let expected = Header {
            cache: CACHE_KIND.into(),
            schema_version: CACHE_SCHEMA,
            with_e,
        };
        let mut records = BTreeMap::new();
        let fresh = match std::fs::metadata(path) {
            Ok(meta) => meta.len() == 0,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => true,
            Err(e) => return Err(e.into()),
        };
        if !fresh {
            let reader = BufReader::new(File::open(path)?);
            let mut lines = reader.lines().enumerate();
            let (_, first) = lines.next().expect("nonempty file has a line");
            let header: Header = serde_json::from_str(&first?)
                .map_err(|e| corrupt(format!("line 1: bad header: {e}")))?;
            if header != expected {
                return Err(corrupt(format!(
                    "header {header:?} does not match this run (with_e = {with_e})"
                ))
                .into());
            }
            for (i, line) in lines {
                let line = line?;
                let record: Case2Record = serde_json::from_str(&line)
                    .map_err(|e| corrupt(format!("line {}: {e}", i + 1)))?;
                if let Some(prev) = records.get(&record.sides) {
                    if *prev != record {
                        return Err(corrupt(format!("conflicting records for N = {}", record.sides)).into());
                    }
                }
                records.insert(record.sides, record);
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if fresh {
            writeln!(file, "{}", serde_json::to_string(&expected)?)?;
            file.flush()?;
        }
        Ok(Case2Cache {
            file: Mutex::new(file),
            records,
        })
    }

    pub fn get(&self, sides: u64) -> Option<&Case2Record> {
        self.records.get(&sides)
    }

    /// Appends one completed record; safe to call from worker threads.
    pub fn append(&self, record: &Case2Record) -> anyhow::Result<()> {
        let line = serde_json::to_string(record)?;
        let mut file = self.file.lock().expect("cache writer poisoned");
        writeln!(file, "{line}")?;
        file.flush()?;
        Ok(())
    }
}
