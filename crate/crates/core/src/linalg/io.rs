//! Plain-text cache format for [`Subspace`].
//!
//! ```text
//! surfconf-subspace <version>
//! fingerprint <16 hex digits>
//! dim <ambient dimension>
//! rows <row count>
//! <nnz> <col> <num> <den> <col> <num> <den> ...
//! ```
//!
//! One row per line, entries in column order. Reading re-validates the
//! reduced row echelon invariants, so a corrupted file is rejected rather
//! than silently producing a different subspace.

use std::io::{BufRead, Write};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{SparseVec, Subspace};
use crate::rational;

pub const SUBSPACE_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "surfconf-subspace";

pub fn write_subspace<W: Write>(mut w: W, s: &Subspace) -> Result<()> {
    writeln!(w, "{MAGIC} {SUBSPACE_FORMAT_VERSION}")?;
    writeln!(w, "fingerprint {:016x}", s.fingerprint())?;
    writeln!(w, "dim {}", s.dim())?;
    writeln!(w, "rows {}", s.rank())?;
    let mut line = String::new();
    for r in s.rows() {
        line.clear();
        line.push_str(&r.nnz().to_string());
        for (c, x) in r.entries() {
            line.push_str(&format!(" {} {} {}", c, x.numer(), x.denom()));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

fn header<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::CacheFormat(format!("missing {key} line")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::CacheFormat(format!("expected {key:?}, got {line:?}")))
}

fn num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::CacheFormat(format!("bad {what}")))
}

pub fn read_subspace<R: BufRead>(r: R) -> Result<Subspace> {
    let lines: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let mut it = lines.iter().map(String::as_str);
    let version: u32 = num(Some(header(it.next(), MAGIC)?), "version")?;
    if version != SUBSPACE_FORMAT_VERSION {
        return Err(Error::CacheFormat(format!(
            "format version {version}, expected {SUBSPACE_FORMAT_VERSION}"
        )));
    }
    let fp = u64::from_str_radix(header(it.next(), "fingerprint")?, 16)
        .map_err(|_| Error::CacheFormat("bad fingerprint".into()))?;
    let dim: usize = num(Some(header(it.next(), "dim")?), "dim")?;
    let nrows: usize = num(Some(header(it.next(), "rows")?), "row count")?;
    let mut rows = Vec::with_capacity(nrows);
    for i in 0..nrows {
        let line = it.next().ok_or_else(|| Error::CacheFormat(format!("missing row {i}")))?;
        let mut toks = line.split_ascii_whitespace();
        let nnz: usize = num(toks.next(), "nnz")?;
        let mut entries = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let c: u32 = num(toks.next(), "column")?;
            let n: BigInt = num(toks.next(), "numerator")?;
            let d: BigInt = num(toks.next(), "denominator")?;
            let x = rational::from_parts(n, d)?;
            if x.is_zero() {
                return Err(Error::CacheFormat(format!("explicit zero in row {i}")));
            }
            entries.push((c, x));
        }
        if toks.next().is_some() {
            return Err(Error::CacheFormat(format!("trailing data in row {i}")));
        }
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::CacheFormat(format!("row {i} not in column order")));
        }
        rows.push(SparseVec::from_sorted_unchecked(entries));
    }
    if it.any(|l| !l.trim().is_empty()) {
        return Err(Error::CacheFormat("trailing lines".into()));
    }
    Subspace::from_rref_rows(rows, dim, fp)
}
