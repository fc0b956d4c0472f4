//! Persistent store of exact Turán records.
//!
//! One record per line, tab separated:
//! `fingerprint kind m n value exact complete witnesses`, where `witnesses`
//! is a comma-separated list of graph6 strings. Lines are parsed on load but
//! only trusted after the caller's revalidation.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use super::{TuranKind, TuranRecord};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub(crate) type Key = (TuranKind, String, usize, usize);

#[derive(Debug, Default)]
pub struct TuranCache {
    path: Option<PathBuf>,
    trusted: Mutex<HashMap<Key, TuranRecord>>,
    pending: Mutex<HashMap<Key, Vec<TuranRecord>>>,
}

impl TuranCache {
    pub fn in_memory() -> Self {
        TuranCache::default()
    }

    /// Opens (or prepares to create) the cache file at `path`. Malformed
    /// lines are skipped with a warning.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut pending: HashMap<Key, Vec<TuranRecord>> = HashMap::new();
        if path.exists() {
            let file = File::open(&path)?;
            file.lock_shared()?;
            for (lineno, line) in BufReader::new(&file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_line(&line) {
                    Ok(rec) => pending.entry(key_of(&rec)).or_default().push(rec),
                    Err(e) => log::warn!("cache {}:{}: skipping corrupt line: {e}", path.display(), lineno + 1),
                }
            }
        }
        Ok(TuranCache {
            path: Some(path),
            trusted: Mutex::new(HashMap::new()),
            pending: Mutex::new(pending),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// A record for `key`. Records read from disk are returned only if
    /// `validate` accepts them; rejected ones are dropped with a warning.
    pub(crate) fn lookup(&self, key: &Key, validate: impl Fn(&TuranRecord) -> bool) -> Option<TuranRecord> {
        if let Some(r) = self.trusted.lock().expect("cache lock").get(key) {
            return Some(r.clone());
        }
        let candidates = self.pending.lock().expect("cache lock").remove(key)?;
        for rec in candidates {
            if validate(&rec) {
                self.trusted.lock().expect("cache lock").insert(key.clone(), rec.clone());
                return Some(rec);
            }
            log::warn!(
                "cache: discarding record {} {:?} ({}, {}): revalidation failed",
                rec.fingerprint,
                rec.kind,
                rec.m,
                rec.n
            );
        }
        None
    }

    /// Stores an exact record in memory and appends it to the file.
    pub(crate) fn insert(&self, rec: &TuranRecord) -> Result<()> {
        let key = key_of(rec);
        {
            let mut trusted = self.trusted.lock().expect("cache lock");
            if trusted.contains_key(&key) {
                return Ok(());
            }
            trusted.insert(key, rec.clone());
        }
        if !rec.exact {
            return Ok(());
        }
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            file.lock()?;
            file.write_all(format_line(rec).as_bytes())?;
            file.flush()?;
            file.unlock()?;
        }
        Ok(())
    }

    /// Keeps a non-exact record in memory only.
    pub(crate) fn remember(&self, rec: &TuranRecord) {
        self.trusted
            .lock()
            .expect("cache lock")
            .entry(key_of(rec))
            .or_insert_with(|| rec.clone());
    }
}

pub(crate) fn key_of(rec: &TuranRecord) -> Key {
    (rec.kind, rec.fingerprint.clone(), rec.m, rec.n)
}

pub fn format_line(rec: &TuranRecord) -> String {
    let witnesses: Vec<String> = rec.witnesses.iter().map(|g| g.to_graph6()).collect();
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        rec.fingerprint,
        rec.kind.as_str(),
        rec.m,
        rec.n,
        rec.value,
        rec.exact as u8,
        rec.witnesses_complete as u8,
        witnesses.join(",")
    )
}

pub fn parse_line(line: &str) -> Result<TuranRecord> {
    let fields: Vec<&str> = line.trim_end_matches(['\n', '\r']).split('\t').collect();
    if fields.len() != 8 {
        return Err(Error::Parse(format!("expected 8 fields, found {}", fields.len())));
    }
    let num = |s: &str, what: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
    };
    let flag = |s: &str, what: &str| -> Result<bool> {
        match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(Error::Parse(format!("bad {what} {s:?}"))),
        }
    };
    let kind = match fields[1] {
        "ex" => TuranKind::Ex,
        "exstar" => TuranKind::ExStar,
        other => return Err(Error::Parse(format!("bad kind {other:?}"))),
    };
    let witnesses = if fields[7].is_empty() {
        Vec::new()
    } else {
        fields[7].split(',').map(SimpleGraph::from_graph6).collect::<Result<Vec<_>>>()?
    };
    Ok(TuranRecord {
        fingerprint: fields[0].to_string(),
        kind,
        m: num(fields[2], "m")?,
        n: num(fields[3], "n")?,
        value: num(fields[4], "value")?,
        exact: flag(fields[5], "exact flag")?,
        witnesses_complete: flag(fields[6], "complete flag")?,
        witnesses,
    })
}
