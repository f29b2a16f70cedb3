use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::engine::Row;
use super::index::{is_stable, TauIndex};
use crate::error::{Error, Result};
use crate::scalar::{PiPoly, Rational};

/// On-disk format version; bump whenever the record layout changes.
pub const STORE_VERSION: u32 = 1;

const HEADER: &str = "wpvol-intersection-cache";

/// Concurrent memo of intersection numbers.
///
/// Values are kept as the rational coefficient c of c·π^{2m}; m is implied
/// by the key. Inserts are first-writer-wins, and a conflicting second write
/// is reported rather than applied.
#[derive(Debug, Default)]
pub struct MemoStore {
    map: DashMap<TauIndex, Arc<Rational>>,
    rows: DashMap<(u32, Vec<u32>), Arc<Row>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StoreStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
    pub version: u32,
}

fn checksum(key: &str, value: &str) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    h.update(b"\t");
    h.update(value.as_bytes());
    let digest = h.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn format_key(idx: &TauIndex) -> String {
    let d: Vec<String> = idx.d().iter().map(u32::to_string).collect();
    format!("{};{};{}", idx.g(), idx.n(), d.join(","))
}

fn parse_key(s: &str) -> Option<TauIndex> {
    let mut parts = s.split(';');
    let g: u32 = parts.next()?.parse().ok()?;
    let n: usize = parts.next()?.parse().ok()?;
    let d_str = parts.next()?;
    if parts.next().is_some() {
        return None;
    }
    let d: Vec<u32> = if d_str.is_empty() {
        Vec::new()
    } else {
        d_str.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?
    };
    if d.len() != n || !d.windows(2).all(|w| w[0] >= w[1]) || !is_stable(g, n) {
        return None;
    }
    Some(TauIndex::from_sorted(g, d))
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn stats(&self) -> StoreStats {
        StoreStats {
            entries: self.len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            version: STORE_VERSION,
        }
    }

    pub fn clear(&self) {
        self.map.clear();
        self.rows.clear();
    }

    pub(crate) fn row(&self, key: &(u32, Vec<u32>)) -> Option<Arc<Row>> {
        self.rows.get(key).map(|r| r.clone())
    }

    /// Rows are derived from stored values, so any racing writer produced
    /// the same data and the first one is kept.
    pub(crate) fn insert_row(&self, key: (u32, Vec<u32>), row: Row) -> Arc<Row> {
        self.rows.entry(key).or_insert_with(|| Arc::new(row)).clone()
    }

    /// Cached value as a PiPoly, without computing anything.
    pub fn get(&self, idx: &TauIndex) -> Option<PiPoly> {
        let c = self.map.get(idx)?.clone();
        Some(to_pipoly(idx, &c))
    }

    pub(crate) fn peek(&self, idx: &TauIndex) -> Option<Arc<Rational>> {
        self.map.get(idx).map(|v| v.clone())
    }

    pub(crate) fn lookup(&self, idx: &TauIndex) -> Option<Arc<Rational>> {
        match self.map.get(idx) {
            Some(v) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(v.clone())
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    /// First writer wins; a different later value is a storage error.
    pub(crate) fn insert(&self, idx: TauIndex, c: Rational) -> Result<Arc<Rational>> {
        let entry = self.map.entry(idx).or_insert_with(|| Arc::new(c.clone()));
        if **entry != c {
            return Err(Error::storage(format!(
                "conflicting values for {}: cached {} vs computed {}",
                entry.key(),
                entry.value(),
                c
            )));
        }
        Ok(entry.value().clone())
    }

    /// Sorted (key, value) snapshot.
    pub fn entries(&self) -> Vec<(TauIndex, PiPoly)> {
        let mut out: Vec<(TauIndex, PiPoly)> = self
            .map
            .iter()
            .map(|e| (e.key().clone(), to_pipoly(e.key(), e.value())))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Writes all entries atomically: a temporary sibling file is fully
    /// written and synced, then renamed over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            writeln!(w, "{HEADER} v{STORE_VERSION}")?;
            for (idx, value) in self.entries() {
                let key = format_key(&idx);
                let val = value.to_json();
                let sum = checksum(&key, &val);
                writeln!(w, "{key}\t{val}\t{sum}")?;
            }
            let file = w.into_inner().map_err(|e| e.into_error())?;
            file.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Loads a cache file, verifying the header, every checksum and that each
    /// value has the π-degree its key implies.
    pub fn load(path: &Path) -> Result<Self> {
        let store = MemoStore::new();
        store.merge_file(path)?;
        Ok(store)
    }

    /// Loads `path` if it exists, otherwise returns an empty store.
    pub fn open(path: &Path) -> Result<Self> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }

    fn merge_file(&self, path: &Path) -> Result<()> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::storage("empty cache file"))?;
        let expected = format!("{HEADER} v{STORE_VERSION}");
        if header != expected {
            return Err(Error::storage(format!(
                "cache header {header:?} does not match {expected:?}"
            )));
        }
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let bad = |what: &str| Error::storage(format!("cache record {}: {what}", lineno + 2));
            let mut fields = line.split('\t');
            let (Some(key), Some(val), Some(sum), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(bad("wrong field count"));
            };
            if checksum(key, val) != sum {
                return Err(bad("checksum mismatch"));
            }
            let idx = parse_key(key).ok_or_else(|| bad("malformed key"))?;
            let value = PiPoly::from_json(val).map_err(|_| bad("malformed value"))?;
            let c = from_pipoly(&idx, &value).ok_or_else(|| bad("value has wrong π-degree"))?;
            self.insert(idx, c)?;
        }
        Ok(())
    }
}

pub(crate) fn to_pipoly(idx: &TauIndex, c: &Rational) -> PiPoly {
    match idx.pi_power() {
        Some(m) => PiPoly::monomial(c.clone(), m),
        None => PiPoly::zero(),
    }
}

fn from_pipoly(idx: &TauIndex, v: &PiPoly) -> Option<Rational> {
    if v.is_zero() {
        return Some(Rational::zero());
    }
    let (j, c) = v.as_monomial()?;
    (Some(j) == idx.pi_power()).then(|| c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    #[test]
    fn key_round_trip() {
        for idx in [
            TauIndex::new(0, vec![0, 0, 0]).unwrap(),
            TauIndex::new(2, vec![]).unwrap(),
            TauIndex::new(3, vec![4, 1, 1, 0]).unwrap(),
        ] {
            assert_eq!(parse_key(&format_key(&idx)), Some(idx));
        }
        assert_eq!(parse_key("0;2;0,0"), None);
        assert_eq!(parse_key("1;2;0,1"), None);
    }

    #[test]
    fn conflicting_insert_is_rejected() {
        let s = MemoStore::new();
        let idx = TauIndex::new(1, vec![1]).unwrap();
        s.insert(idx.clone(), parse_rational("1/2").unwrap()).unwrap();
        s.insert(idx.clone(), parse_rational("1/2").unwrap()).unwrap();
        assert!(matches!(
            s.insert(idx, parse_rational("1/3").unwrap()),
            Err(Error::Storage(_))
        ));
    }
}
