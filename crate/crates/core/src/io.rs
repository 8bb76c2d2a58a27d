//! Text file formats.
//!
//! - **MVT** (multi-view tensor), version 1: a header line `MVT1 <n> <v>`
//!   followed by `v` blocks of `n` lines, each line holding `n`
//!   comma-separated decimals. Block `i` is frontal slice `i`, row by row.
//!   Blank lines are ignored on input.
//! - **Matrix CSV**: one matrix row per line, comma-separated, no header.
//! - **Labels**: one non-negative integer per line.
//! - **Residual history CSV**: header `iter,r1,r2,mu`.
//!
//! Numbers are written in Rust's shortest round-trip representation, so a
//! write followed by a read reproduces every value exactly. Writers go
//! through a temporary file in the destination directory that is renamed into
//! place, so a failed write never leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::ResidualRecord;
use crate::spectral::ClusterLabels;
use crate::tensor3::Tensor3;
use crate::Matrix;

pub const MVT_MAGIC: &str = "MVT1";
pub const RESIDUAL_HEADER: &str = "iter,r1,r2,mu";

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn parse_row(line_no: usize, line: &str) -> Result<Vec<f64>> {
    line.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::Parse { line: line_no, msg: format!("not a number: {tok:?}") })?;
            if !x.is_finite() {
                return parse_err(line_no, format!("non-finite value {tok:?}"));
            }
            Ok(x)
        })
        .collect()
}

fn push_row(out: &mut String, values: impl Iterator<Item = f64>) {
    for (i, x) in values.enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{x:?}").expect("writing to a String");
    }
    out.push('\n');
}

/// Writes `contents` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn format_mvt(t: &Tensor3) -> Result<String> {
    let [n, n2, v] = t.dims();
    if n != n2 {
        return Err(Error::DimensionMismatch(format!("MVT holds n x n x v tensors, got {:?}", t.dims())));
    }
    let mut out = format!("{MVT_MAGIC} {n} {v}\n");
    for k in 0..v {
        for a in 0..n {
            push_row(&mut out, (0..n).map(|b| t.get(a, b, k)));
        }
    }
    Ok(out)
}

pub fn parse_mvt(text: &str) -> Result<Tensor3> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let Some((hl, header)) = lines.next() else { return parse_err(1, "empty MVT file") };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != MVT_MAGIC {
        return parse_err(hl, format!("expected header `{MVT_MAGIC} <n> <v>`, got {header:?}"));
    }
    let dim = |s: &str| s.parse::<usize>().ok().filter(|&d| d > 0);
    let (Some(n), Some(v)) = (dim(parts[1]), dim(parts[2])) else {
        return parse_err(hl, "n and v must be positive integers");
    };
    let mut t = Tensor3::zeros(n, n, v)?;
    for k in 0..v {
        for a in 0..n {
            let Some((ln, line)) = lines.next() else {
                return parse_err(hl, format!("expected {} data rows, file ended early", n * v));
            };
            let row = parse_row(ln, line)?;
            if row.len() != n {
                return parse_err(ln, format!("expected {n} values, got {}", row.len()));
            }
            for (b, x) in row.into_iter().enumerate() {
                t.set(a, b, k, x);
            }
        }
    }
    if let Some((ln, _)) = lines.next() {
        return parse_err(ln, "trailing data after the last slice");
    }
    Ok(t)
}

pub fn read_mvt(path: &Path) -> Result<Tensor3> {
    parse_mvt(&fs::read_to_string(path)?)
}

pub fn write_mvt(path: &Path, t: &Tensor3) -> Result<()> {
    write_atomic(path, &format_mvt(t)?)
}

pub fn format_matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for r in m.row_iter() {
        push_row(&mut out, r.iter().copied());
    }
    out
}

pub fn parse_matrix_csv(text: &str) -> Result<Matrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = parse_row(i + 1, line)?;
        if let Some(first) = rows.first() {
            let first: &Vec<f64> = first;
            if row.len() != first.len() {
                return parse_err(i + 1, format!("expected {} columns, got {}", first.len(), row.len()));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return parse_err(1, "empty matrix file");
    }
    let cols = rows[0].len();
    Ok(Matrix::from_fn(rows.len(), cols, |r, c| rows[r][c]))
}

pub fn read_matrix_csv(path: &Path) -> Result<Matrix> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

pub fn write_matrix_csv(path: &Path, m: &Matrix) -> Result<()> {
    write_atomic(path, &format_matrix_csv(m))
}

pub fn format_labels(labels: &[usize]) -> String {
    let mut out = String::new();
    for l in labels {
        writeln!(out, "{l}").expect("writing to a String");
    }
    out
}

pub fn parse_labels(text: &str) -> Result<ClusterLabels> {
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let l = line
            .parse::<usize>()
            .map_err(|_| Error::Parse { line: i + 1, msg: format!("not a non-negative integer: {line:?}") })?;
        labels.push(l);
    }
    Ok(ClusterLabels::from_labels(labels))
}

pub fn read_labels(path: &Path) -> Result<ClusterLabels> {
    parse_labels(&fs::read_to_string(path)?)
}

pub fn write_labels(path: &Path, labels: &[usize]) -> Result<()> {
    write_atomic(path, &format_labels(labels))
}

pub fn format_residuals(history: &[ResidualRecord]) -> String {
    let mut out = format!("{RESIDUAL_HEADER}\n");
    for r in history {
        writeln!(out, "{},{:?},{:?},{:?}", r.iter, r.r1, r.r2, r.mu).expect("writing to a String");
    }
    out
}

pub fn write_residuals(path: &Path, history: &[ResidualRecord]) -> Result<()> {
    write_atomic(path, &format_residuals(history))
}
