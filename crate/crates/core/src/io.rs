//! DMX1 design-matrix files, CSV ingestion, label and index lists.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DesignMatrix;

/// Element type of a DMX1 payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F32 = 0,
    F64 = 1,
}

pub(crate) struct ByteCursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteCursor<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::format(format!(
                "unexpected end of data at byte {} (needed {n} more)",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.remaining() == 0
    }
}

/// Encode as DMX1. With `Dtype::F32` values are rounded to single precision.
pub fn write_dmx(design: &DesignMatrix, dtype: Dtype, mut w: impl Write) -> Result<()> {
    let n = u32::try_from(design.rows()).map_err(|_| Error::invalid("n does not fit in u32"))?;
    let m = u32::try_from(design.cols()).map_err(|_| Error::invalid("m does not fit in u32"))?;
    let mut buf = Vec::with_capacity(13 + design.as_slice().len() * 8);
    buf.extend_from_slice(b"DMX1");
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&m.to_le_bytes());
    buf.push(dtype as u8);
    for &x in design.as_slice() {
        match dtype {
            Dtype::F32 => buf.extend_from_slice(&(x as f32).to_le_bytes()),
            Dtype::F64 => buf.extend_from_slice(&x.to_le_bytes()),
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_dmx(bytes: &[u8]) -> Result<DesignMatrix> {
    let mut cur = ByteCursor::new(bytes);
    if cur.take(4).ok() != Some(b"DMX1".as_slice()) {
        return Err(Error::format("missing DMX1 magic"));
    }
    let n = cur.u32()? as usize;
    let m = cur.u32()? as usize;
    let dtype = match cur.u8()? {
        0 => Dtype::F32,
        1 => Dtype::F64,
        other => return Err(Error::format(format!("unknown DMX1 dtype {other}"))),
    };
    let width = if dtype == Dtype::F32 { 4 } else { 8 };
    let expected = n
        .checked_mul(m)
        .and_then(|c| c.checked_mul(width))
        .ok_or_else(|| Error::format("DMX1 header sizes overflow"))?;
    if cur.remaining() != expected {
        return Err(Error::format(format!(
            "DMX1 payload has {} bytes, header implies {expected}",
            cur.remaining()
        )));
    }
    let mut data = Vec::with_capacity(n * m);
    for _ in 0..n * m {
        data.push(match dtype {
            Dtype::F32 => cur.f32()? as f64,
            Dtype::F64 => cur.f64()?,
        });
    }
    DesignMatrix::new(n, m, data).map_err(|e| Error::format(e.to_string()))
}

/// One sample per line, comma-separated; a non-numeric first line is a header.
pub fn parse_csv(text: &str) -> Result<DesignMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if rows.is_empty() && lineno == 0 => continue,
            Err(e) => return Err(Error::format(format!("line {}: {e}", lineno + 1))),
        }
    }
    if rows.is_empty() {
        return Err(Error::format("CSV contains no data rows"));
    }
    let m = rows[0].len();
    if let Some(i) = rows.iter().position(|r| r.len() != m) {
        return Err(Error::format(format!(
            "CSV row {} has {} fields, expected {m}",
            i + 1,
            rows[i].len()
        )));
    }
    DesignMatrix::from_rows(&rows).map_err(|e| Error::format(e.to_string()))
}

/// Read a design matrix, choosing DMX1 or CSV by content.
pub fn load_design(path: &Path) -> Result<DesignMatrix> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"DMX1") {
        read_dmx(&bytes)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| {
            Error::format(format!("{} is neither DMX1 nor UTF-8 CSV", path.display()))
        })?;
        parse_csv(&text)
    }
}

pub fn save_design(path: &Path, design: &DesignMatrix, dtype: Dtype) -> Result<()> {
    let f = fs::File::create(path)?;
    write_dmx(design, dtype, std::io::BufWriter::new(f))
}

/// Newline-delimited integer class ids.
pub fn parse_labels(text: &str, n: Option<usize>) -> Result<Vec<usize>> {
    let labels = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<usize>()
                .map_err(|e| Error::format(format!("label line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = n {
        if labels.len() != n {
            return Err(Error::format(format!(
                "{} labels for {n} samples",
                labels.len()
            )));
        }
    }
    Ok(labels)
}

pub fn load_labels(path: &Path, n: Option<usize>) -> Result<Vec<usize>> {
    parse_labels(&fs::read_to_string(path)?, n)
}

/// Indices separated by whitespace or commas.
pub fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::invalid(format!("bad index '{t}': {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dmx_round_trip_both_dtypes() {
        let d = DesignMatrix::new(2, 3, vec![1.0, -2.5, 0.125, 3.0, 1e-3, 7.0]).unwrap();
        for dtype in [Dtype::F32, Dtype::F64] {
            let mut buf = Vec::new();
            write_dmx(&d, dtype, &mut buf).unwrap();
            assert_eq!(buf[12], dtype as u8);
            let back = read_dmx(&buf).unwrap();
            for (a, b) in back.as_slice().iter().zip(d.as_slice()) {
                match dtype {
                    Dtype::F32 => assert_eq!(*a, (*b as f32) as f64),
                    Dtype::F64 => assert_eq!(a.to_bits(), b.to_bits()),
                }
            }
        }
    }

    #[test]
    fn truncated_payload() {
        let d = DesignMatrix::new(1, 2, vec![1.0, 2.0]).unwrap();
        let mut buf = Vec::new();
        write_dmx(&d, Dtype::F64, &mut buf).unwrap();
        buf.pop();
        assert!(matches!(read_dmx(&buf), Err(Error::Format(_))));
    }

    #[test]
    fn csv_with_and_without_header() {
        let a = parse_csv("x,y\n1,2\n3,4\n").unwrap();
        let b = parse_csv("1,2\n3,4").unwrap();
        assert_eq!(a, b);
        assert!(parse_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn labels_and_indices() {
        assert_eq!(parse_labels("0\n1\n\n2\n", Some(3)).unwrap(), vec![0, 1, 2]);
        assert!(parse_labels("0\n1\n", Some(3)).is_err());
        assert_eq!(parse_indices("3, 1\n2").unwrap(), vec![3, 1, 2]);
    }
}
