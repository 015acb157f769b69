//! Batch classification: CSV in, JSONL out, resumable.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use altsurg::alexpoly::parse_polynomial;
use altsurg::changemaker::StableCoefficients;
use altsurg::classify::{classify, classify_rho, Classification, LatticeReport};
use altsurg::osb_search::SearchConfig;

use crate::certificate::SCHEMA_VERSION;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BatchInput {
    Alexander(Vec<i64>),
    Rho(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchItem {
    pub id: String,
    pub input: BatchInput,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchRecord {
    pub schema_version: u32,
    pub id: String,
    #[serde(flatten)]
    pub result: RecordResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RecordResult {
    Ok { classification: Box<Classification> },
    Error { error: String, exit_code: i32, partial: Vec<LatticeReport> },
}

fn parse_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(';')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| CliError::Usage(format!("bad coefficient {x:?}"))))
        .collect()
}

/// Lines are `[id,]payload` where the payload is `rho:a;b;...`,
/// `alexander:a;b;...` or a bare semicolon-separated Alexander coefficient
/// list. Blank lines and lines starting with `#` are skipped.
pub fn parse_batch(text: &str) -> Result<Vec<BatchItem>, CliError> {
    let mut items = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, payload) = match line.split_once(',') {
            Some((id, p)) => (id.trim().to_string(), p.trim()),
            None => ((lineno + 1).to_string(), line),
        };
        let input = if let Some(r) = payload.strip_prefix("rho:") {
            BatchInput::Rho(parse_list(r)?)
        } else {
            BatchInput::Alexander(parse_list(payload.strip_prefix("alexander:").unwrap_or(payload))?)
        };
        if !seen.insert(id.clone()) {
            return Err(CliError::Usage(format!("duplicate batch id {id:?}")));
        }
        items.push(BatchItem { id, input });
    }
    Ok(items)
}

pub fn run_item(item: &BatchItem, cfg: &SearchConfig) -> BatchRecord {
    let outcome = match &item.input {
        BatchInput::Alexander(raw) => parse_polynomial(raw)
            .map_err(Into::into)
            .and_then(|p| classify(&p, cfg)),
        BatchInput::Rho(r) => StableCoefficients::new(r.clone())
            .map_err(Into::into)
            .and_then(|rho| classify_rho(&rho, cfg)),
    };
    let result = match outcome {
        Ok(c) => RecordResult::Ok { classification: Box::new(c) },
        Err(e) => RecordResult::Error {
            error: e.source.to_string(),
            exit_code: crate::exit_code(&e.source),
            partial: e.partial,
        },
    };
    BatchRecord { schema_version: SCHEMA_VERSION, id: item.id.clone(), result }
}

/// Count complete records in an existing output file and cut off any
/// trailing partial line.
fn resume_cursor(out: &Path) -> Result<usize, CliError> {
    if !out.exists() {
        return Ok(0);
    }
    let mut text = String::new();
    File::open(out)?.read_to_string(&mut text)?;
    let keep = text.rfind('\n').map_or(0, |i| i + 1);
    if keep < text.len() {
        OpenOptions::new().write(true).open(out)?.set_len(keep as u64)?;
    }
    Ok(text[..keep].lines().count())
}

/// Classify every item, appending one JSONL record per item to `out`.
/// Records are written in input order and flushed one by one. With
/// `resume`, items already present in `out` are skipped.
pub fn run_batch(
    items: &[BatchItem],
    out: &Path,
    cfg: &SearchConfig,
    resume: bool,
    workers: usize,
) -> Result<usize, CliError> {
    let start = if resume { resume_cursor(out)? } else { 0 };
    if start > items.len() {
        return Err(CliError::Usage("output file has more records than the batch".into()));
    }
    let file = if resume {
        OpenOptions::new().create(true).append(true).open(out)?
    } else {
        File::create(out)?
    };
    let mut w = BufWriter::new(file);
    let chunk = workers.max(1);
    for group in items[start..].chunks(chunk) {
        let records: Vec<BatchRecord> = group.par_iter().map(|it| run_item(it, cfg)).collect();
        for r in records {
            serde_json::to_writer(&mut w, &r)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
    }
    Ok(items.len() - start)
}
