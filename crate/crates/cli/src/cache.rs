//! Persisted μ-cache: an append-only text file.
//!
//! The first line is [`HEADER`]. Each further line is one record
//! `fingerprint \t nvars \t order \t terms \t checksum`, with terms written as
//! `e1,e2,…=c` joined by `;` and the checksum an FNV-1a hash of the rest of the
//! line. Unreadable records are skipped; the cache only ever saves work.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use emlattice::exactlin::parse_rational;
use emlattice::germ::{MultiIndex, TruncSeries, MAX_VARS};
use emlattice::mu::MuEngine;

use crate::error::{CliError, CliResult};

pub const HEADER: &str = "emlattice-mu-cache 1";

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub fn encode(fingerprint: &str, s: &TruncSeries) -> String {
    let terms: Vec<String> = s
        .sorted_terms()
        .iter()
        .map(|(a, c)| {
            let e: Vec<String> = (0..s.nvars()).map(|i| a.get(i).to_string()).collect();
            format!("{}={c}", e.join(","))
        })
        .collect();
    let body = format!("{fingerprint}\t{}\t{}\t{}", s.nvars(), s.order(), terms.join(";"));
    format!("{body}\t{:016x}", fnv1a(&body))
}

pub fn decode(line: &str) -> Option<(String, TruncSeries)> {
    let (body, sum) = line.rsplit_once('\t')?;
    if u64::from_str_radix(sum, 16).ok()? != fnv1a(body) {
        return None;
    }
    let mut f = body.split('\t');
    let fingerprint = f.next()?.to_string();
    let nvars: usize = f.next()?.parse().ok()?;
    let order: usize = f.next()?.parse().ok()?;
    let terms = f.next()?;
    if f.next().is_some() || nvars > MAX_VARS || fingerprint.is_empty() {
        return None;
    }
    let mut s = TruncSeries::zero(nvars, order);
    for t in terms.split(';').filter(|t| !t.is_empty()) {
        let (e, c) = t.split_once('=')?;
        let e: Vec<usize> = e.split(',').filter(|x| !x.is_empty()).map(|x| x.parse().ok()).collect::<Option<_>>()?;
        if e.len() != nvars || e.iter().sum::<usize>() > order || e.iter().any(|&x| x > u16::MAX as usize) {
            return None;
        }
        s.add_term(MultiIndex::from_slice(&e), parse_rational(c)?);
    }
    Some((fingerprint, s))
}

/// The file behind `--cache`.
pub struct CacheFile {
    path: std::path::PathBuf,
    known: HashSet<String>,
    writable: bool,
}

impl CacheFile {
    /// Loads every valid record into `engine`.
    pub fn open(path: &Path, engine: &MuEngine) -> CliResult<Self> {
        let mut known = HashSet::new();
        let mut writable = true;
        match std::fs::read_to_string(path) {
            Ok(text) => {
                let mut lines = text.lines();
                match lines.next() {
                    None => {}
                    Some(HEADER) => {
                        for (i, line) in lines.enumerate() {
                            match decode(line) {
                                Some((k, s)) => {
                                    engine.preload(k.clone(), s);
                                    known.insert(k);
                                }
                                None => log::warn!("{}: skipping corrupt cache record on line {}", path.display(), i + 2),
                            }
                        }
                    }
                    Some(_) => {
                        log::warn!("{}: not a cache file of this version, leaving it untouched", path.display());
                        writable = false;
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(CliError::Usage(format!("cannot read cache {}: {e}", path.display()))),
        }
        Ok(CacheFile { path: path.to_path_buf(), known, writable })
    }

    pub fn loaded(&self) -> usize {
        self.known.len()
    }

    /// Appends the engine's entries that the file lacks; returns how many.
    pub fn save(&mut self, engine: &MuEngine) -> CliResult<usize> {
        if !self.writable {
            return Ok(0);
        }
        let mut out = String::new();
        let fresh = !self.path.exists() || std::fs::metadata(&self.path).map(|m| m.len() == 0).unwrap_or(true);
        if fresh {
            out.push_str(HEADER);
            out.push('\n');
        }
        let mut n = 0;
        for (k, s) in engine.cache_entries() {
            if self.known.insert(k.clone()) {
                out.push_str(&encode(&k, &s));
                out.push('\n');
                n += 1;
            }
        }
        if n == 0 && !fresh {
            return Ok(0);
        }
        let io = |e: std::io::Error| CliError::Usage(format!("cannot write cache {}: {e}", self.path.display()));
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        // one write per run keeps concurrent appends line-atomic in practice
        f.write_all(out.as_bytes()).map_err(io)?;
        Ok(n)
    }
}
