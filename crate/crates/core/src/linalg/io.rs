//! Matrix files.
//!
//! Binary layout: `b"VNMX"`, `u32` rows, `u32` cols, `u32` reserved (zero),
//! all little-endian, then `rows * cols` little-endian `f64` in column-major
//! order. CSV layout: one matrix row per line, comma-separated.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::DenseMatrix;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"VNMX";
const HEADER_LEN: usize = 16;

pub fn write_matrix_binary<W: Write>(mut w: W, a: &DenseMatrix) -> Result<()> {
    let rows = u32::try_from(a.rows()).map_err(|_| Error::InvalidInput("too many rows".into()))?;
    let cols =
        u32::try_from(a.cols()).map_err(|_| Error::InvalidInput("too many columns".into()))?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * a.as_slice().len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&rows.to_le_bytes());
    buf.extend_from_slice(&cols.to_le_bytes());
    buf.extend_from_slice(&0u32.to_le_bytes());
    for v in a.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_matrix_binary<R: Read>(mut r: R) -> Result<DenseMatrix> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap()) as usize;
    let (rows, cols) = (word(4), word(8));
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != count * 8 {
        return Err(Error::Format(format!(
            "expected {} payload bytes, found {}",
            count * 8,
            body.len()
        )));
    }
    let data = body
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    DenseMatrix::new(rows, cols, data)
}

pub fn write_matrix_csv<W: Write>(mut w: W, a: &DenseMatrix) -> Result<()> {
    let mut line = String::new();
    for i in 0..a.rows() {
        line.clear();
        for j in 0..a.cols() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:.17e}", a.get(i, j)));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_matrix_csv<R: Read>(r: R) -> Result<DenseMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format("empty matrix".into()));
    }
    DenseMatrix::from_rows(&rows)
}

/// Reads a matrix, choosing the format from the file extension (`.csv` or binary).
pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let file = fs::File::open(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        read_matrix_csv(file)
    } else {
        read_matrix_binary(BufReader::new(file))
    }
}
