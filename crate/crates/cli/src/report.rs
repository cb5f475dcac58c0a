//! Report records and their text, JSON and CSV renderings.

use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use surfconf_core::verifier::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A verdict as emitted by `verify`: the verdict payload plus wall time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictRecord {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub elapsed_ms: u64,
}

impl From<Verdict> for VerdictRecord {
    fn from(verdict: Verdict) -> Self {
        let elapsed_ms = verdict.elapsed.as_millis() as u64;
        Self { verdict, elapsed_ms }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    theorem: &'a str,
    k: Option<usize>,
    n: Option<usize>,
    g: usize,
    w: Option<i64>,
    status: String,
    tags: String,
    dims: String,
    message: &'a str,
    elapsed_ms: u64,
}

fn dims_text(v: &Verdict, sep: &str) -> String {
    v.dims.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join(sep)
}

pub fn write_verdicts<W: Write>(out: W, records: &[VerdictRecord], format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(out, records),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                let v = &r.verdict;
                w.serialize(CsvRow {
                    theorem: &v.theorem,
                    k: v.params.k,
                    n: v.params.n,
                    g: v.params.g,
                    w: v.params.w,
                    status: v.status.to_string(),
                    tags: v.tags.join(";"),
                    dims: dims_text(v, ";"),
                    message: v.message.as_deref().unwrap_or(""),
                    elapsed_ms: r.elapsed_ms,
                })?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            let mut out = out;
            for r in records {
                let v = &r.verdict;
                let p = &v.params;
                let mut params = Vec::new();
                if let Some(k) = p.k {
                    params.push(format!("k={k}"));
                }
                if let Some(n) = p.n {
                    params.push(format!("n={n}"));
                }
                params.push(format!("g={}", p.g));
                if let Some(w) = p.w {
                    params.push(format!("w={w}"));
                }
                write!(out, "{:<13} {:<18} {}", v.theorem, params.join(" "), v.status)?;
                if !v.tags.is_empty() {
                    write!(out, " [{}]", v.tags.join(", "))?;
                }
                writeln!(out, " ({} ms)", r.elapsed_ms)?;
                if !v.dims.is_empty() {
                    writeln!(out, "  {}", dims_text(v, " "))?;
                }
                if let Some(m) = &v.message {
                    writeln!(out, "  {m}")?;
                }
                if let Some(p) = &v.pairing {
                    let plus = p.diagonal_signs.iter().filter(|s| **s == 1).count();
                    writeln!(
                        out,
                        "  pairing {0}x{0}: diagonal +1 x{1}, -1 x{2}; off-diagonal max |x| = {3}",
                        p.family_size,
                        plus,
                        p.family_size - plus,
                        p.off_diagonal_max_abs
                    )?;
                }
                if let Some(w) = &v.witness {
                    writeln!(out, "  witness in {} ({} terms)", w.space, w.terms.len())?;
                }
            }
            Ok(())
        }
    }
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes a flat record as JSON, a one-row CSV, or `key: value` lines.
pub fn write_record<W: Write, T: Serialize>(mut out: W, value: &T, format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(out, value),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(value)?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            if let serde_json::Value::Object(map) = serde_json::to_value(value)? {
                for (k, v) in map {
                    match v {
                        serde_json::Value::String(s) => writeln!(out, "{k}: {s}")?,
                        other => writeln!(out, "{k}: {other}")?,
                    }
                }
            }
            Ok(())
        }
    }
}
