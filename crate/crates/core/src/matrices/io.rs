//! Matrix files: a small self-describing binary format and CSV.
//!
//! Binary layout: the 8 bytes `ZOLOMAT1`, rows and cols as little-endian
//! u64, then rows·cols little-endian f64 in row-major order.

use std::io::{BufRead, Read, Write};

use super::DenseMatrix;
use crate::error::{Result, ZoloError};

pub const MAGIC: &[u8; 8] = b"ZOLOMAT1";

/// 17 significant digits, enough to round-trip any double.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_binary<W: Write>(m: &DenseMatrix, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&(m.rows() as u64).to_le_bytes())?;
    out.write_all(&(m.cols() as u64).to_le_bytes())?;
    for v in m.to_row_major() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<DenseMatrix> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(ZoloError::Parse("not a ZOLOMAT1 matrix file".into()));
    }
    let mut word = [0u8; 8];
    input.read_exact(&mut word)?;
    let rows = u64::from_le_bytes(word);
    input.read_exact(&mut word)?;
    let cols = u64::from_le_bytes(word);
    let implausible = || ZoloError::Parse(format!("implausible dimensions {rows}×{cols}"));
    let count = rows
        .checked_mul(cols)
        .filter(|c| *c <= 1 << 32)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(implausible)?;
    let (rows, cols) = (rows as usize, cols as usize);
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        input.read_exact(&mut word)?;
        data.push(f64::from_le_bytes(word));
    }
    DenseMatrix::from_row_major(rows, cols, &data)
}

/// CSV with a `#` comment line, a header `c0,c1,…` and one row per line.
pub fn write_csv<W: Write>(m: &DenseMatrix, comment: &str, mut out: W) -> Result<()> {
    writeln!(out, "# {comment}")?;
    let header: Vec<String> = (0..m.cols()).map(|j| format!("c{j}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_f64(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(input: R) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut saw_header = false;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            if line.split(',').all(|f| f.trim().parse::<f64>().is_err()) {
                continue;
            }
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|e| ZoloError::Parse(format!("'{f}': {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ZoloError::Parse("ragged CSV rows".into()));
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    DenseMatrix::from_row_major(rows.len(), cols, &rows.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DenseMatrix {
        DenseMatrix::from_fn(3, 2, |i, j| (i as f64 + 1.0) / (j as f64 + 3.0) * 1e-7 + 0.1)
    }

    #[test]
    fn binary_roundtrip() {
        let m = sample();
        let mut buf = Vec::new();
        write_binary(&m, &mut buf).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        assert_eq!(buf.len(), 8 + 16 + 6 * 8);
        assert_eq!(read_binary(buf.as_slice()).unwrap(), m);
        buf[0] = b'X';
        assert!(matches!(read_binary(buf.as_slice()), Err(ZoloError::Parse(_))));
    }

    #[test]
    fn csv_roundtrip_is_lossless() {
        let m = sample();
        let mut buf = Vec::new();
        write_csv(&m, "test", &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), m);
    }
}
