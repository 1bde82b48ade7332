//! File formats for integral data and evaluation grids.
//!
//! Two equivalent input forms are accepted:
//!
//! * CSV with header `left,right,integral`, one row per segment. Rows must
//!   chain: each row's `left` must equal the previous row's `right` exactly
//!   (as parsed). Jumps cannot be expressed in this form and are supplied
//!   separately.
//! * JSON `{ "nodes": [...], "integrals": [...], "jumps": [...] }` where
//!   `jumps` is optional.
//!
//! All numeric output uses Rust's shortest round-trip decimal formatting, so
//! files written here parse back to bit-identical values.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

/// Expected header line of the CSV segment format.
pub const CSV_HEADER: &str = "left,right,integral";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path} line 1: expected header `{CSV_HEADER}`, found `{found}`")]
    BadHeader { path: PathBuf, found: String },
    #[error("{path} line {line}: {msg}")]
    BadRow {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    BadJson { path: PathBuf, msg: String },
    #[error("{path}: no segment rows found")]
    Empty { path: PathBuf },
    #[error("{path}: unrecognized extension (expected .csv or .json)")]
    UnknownFormat { path: PathBuf },
}

/// Parsed integral data: `nodes` bound the segments, `integrals[i]` is the
/// datum over `[nodes[i], nodes[i+1]]`, and `jumps` lists declared
/// discontinuity abscissae (empty when the input carries none).
#[derive(Debug, Clone, PartialEq)]
pub struct InputData {
    pub nodes: Vec<f64>,
    pub integrals: Vec<f64>,
    pub jumps: Vec<f64>,
}

/// Reads integral data, dispatching on the file extension (`.csv`/`.json`).
pub fn read_input(path: &Path) -> Result<InputData, IoError> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("csv") => read_csv(path),
        Some("json") => read_json(path),
        _ => Err(IoError::UnknownFormat {
            path: path.to_path_buf(),
        }),
    }
}

/// Reads the CSV segment form. The returned `jumps` list is always empty;
/// callers supply jumps out of band for this format.
pub fn read_csv(path: &Path) -> Result<InputData, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines().enumerate();

    let header = loop {
        match lines.next() {
            Some((idx, raw)) if raw.trim().is_empty() && idx == 0 => continue,
            Some((_, raw)) => break raw,
            None => {
                return Err(IoError::Empty {
                    path: path.to_path_buf(),
                })
            }
        }
    };
    let normalized: Vec<&str> = header.split(',').map(str::trim).collect();
    if normalized != ["left", "right", "integral"] {
        return Err(IoError::BadHeader {
            path: path.to_path_buf(),
            found: header.trim().to_string(),
        });
    }

    let mut nodes: Vec<f64> = Vec::new();
    let mut integrals: Vec<f64> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1; // 1-based, counting the header line
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(IoError::BadRow {
                path: path.to_path_buf(),
                line,
                msg: format!("expected 3 comma-separated fields, found {}", fields.len()),
            });
        }
        let parse = |what: &str, s: &str| -> Result<f64, IoError> {
            s.parse::<f64>().map_err(|_| IoError::BadRow {
                path: path.to_path_buf(),
                line,
                msg: format!("cannot parse {what} `{s}` as a number"),
            })
        };
        let left = parse("left endpoint", fields[0])?;
        let right = parse("right endpoint", fields[1])?;
        let datum = parse("integral", fields[2])?;
        match nodes.last() {
            None => nodes.push(left),
            Some(&prev) if prev == left => {}
            Some(&prev) => {
                return Err(IoError::BadRow {
                    path: path.to_path_buf(),
                    line,
                    msg: format!(
                        "segments do not chain: left endpoint {left} differs from \
                         previous right endpoint {prev}"
                    ),
                });
            }
        }
        nodes.push(right);
        integrals.push(datum);
    }
    if integrals.is_empty() {
        return Err(IoError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(InputData {
        nodes,
        integrals,
        jumps: Vec::new(),
    })
}

#[derive(Deserialize)]
struct JsonInput {
    nodes: Vec<f64>,
    integrals: Vec<f64>,
    #[serde(default)]
    jumps: Vec<f64>,
}

/// Reads the JSON form `{ "nodes": [...], "integrals": [...], "jumps": [...] }`.
pub fn read_json(path: &Path) -> Result<InputData, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed: JsonInput = serde_json::from_str(&text).map_err(|e| IoError::BadJson {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    if parsed.integrals.is_empty() {
        return Err(IoError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(InputData {
        nodes: parsed.nodes,
        integrals: parsed.integrals,
        jumps: parsed.jumps,
    })
}

/// Renders integral data in the CSV segment form (jumps are not representable
/// there and are ignored).
pub fn to_csv(nodes: &[f64], integrals: &[f64]) -> String {
    let mut out = String::with_capacity(32 * (integrals.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, datum) in integrals.iter().enumerate() {
        let _ = writeln!(out, "{:e},{:e},{:e}", nodes[i], nodes[i + 1], datum);
    }
    out
}

/// Reads an evaluation grid: one abscissa per line, blank lines skipped.
pub fn read_points(path: &Path) -> Result<Vec<f64>, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        let x = s.parse::<f64>().map_err(|_| IoError::BadRow {
            path: path.to_path_buf(),
            line: idx + 1,
            msg: format!("cannot parse `{s}` as a number"),
        })?;
        points.push(x);
    }
    if points.is_empty() {
        return Err(IoError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(points)
}

/// Writes `contents` to `path` atomically: the bytes land in a temporary file
/// in the same directory, which is then renamed over the target. Readers never
/// observe a half-written file.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), IoError> {
    let wrap = |source: std::io::Error| IoError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let stem = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = dir.join(format!(".{stem}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(wrap)?;
    fs::rename(&tmp, path).map_err(|source| {
        let _ = fs::remove_file(&tmp);
        wrap(source)
    })
}
