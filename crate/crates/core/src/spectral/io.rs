//! Field files and norm time series.
//!
//! A field file is two text lines followed by raw data:
//!
//! ```text
//! ddlab-field v1
//! n=2 N=256 L=32 t=1.5
//! <N^n little-endian (re, im) f32 pairs>
//! ```

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{make_grid, Complex, Field, GridSpec, SpectralError};

const MAGIC: &str = "ddlab-field v1";
pub const NORMS_HEADER: &str = "t,l2,lq,linf";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub grid: GridSpec,
    pub t: f64,
}

pub fn write_field<W: Write>(mut w: W, header: &FieldHeader, data: &[Complex]) -> Result<(), SpectralError> {
    header.grid.check_field(data)?;
    let g = &header.grid;
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "n={} N={} L={} t={}", g.dim, g.points, g.half_length, header.t)?;
    let mut buf = Vec::with_capacity(8 * data.len());
    for z in data {
        buf.extend_from_slice(&(z.re as f32).to_le_bytes());
        buf.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn field_value<T: std::str::FromStr>(tok: Option<&str>, key: &str) -> Result<T, SpectralError> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| SpectralError::Format(format!("missing or malformed `{key}`")))
}

pub fn read_field<R: BufRead>(mut r: R) -> Result<(FieldHeader, Field), SpectralError> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    if line.trim_end() != MAGIC {
        return Err(SpectralError::Format("bad magic line".into()));
    }
    line.clear();
    r.read_line(&mut line)?;
    let mut toks = line.split_whitespace();
    let dim: usize = field_value(toks.next(), "n")?;
    let points: usize = field_value(toks.next(), "N")?;
    let half_length: f64 = field_value(toks.next(), "L")?;
    let t: f64 = field_value(toks.next(), "t")?;
    let grid = make_grid(dim, points, half_length)?;
    let mut bytes = vec![0u8; 8 * grid.len()];
    r.read_exact(&mut bytes)
        .map_err(|_| SpectralError::Format("truncated field data".into()))?;
    let data = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex::new(re as f64, im as f64)
        })
        .collect();
    Ok((FieldHeader { grid, t }, data))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub t: f64,
    pub l2: f64,
    pub lq: f64,
    pub linf: f64,
}

pub fn write_norms_csv<W: Write>(mut w: W, rows: &[NormRow]) -> std::io::Result<()> {
    writeln!(w, "{NORMS_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.t, r.l2, r.lq, r.linf)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        let grid = make_grid(2, 8, 2.5).unwrap();
        let data: Field = (0..grid.len()).map(|i| Complex::new(i as f64 * 0.5, -(i as f64))).collect();
        let header = FieldHeader { grid, t: 1.25 };
        let mut buf = Vec::new();
        write_field(&mut buf, &header, &data).unwrap();
        assert!(buf.starts_with(b"ddlab-field v1\nn=2 N=8 L=2.5 t=1.25\n"));
        let (h, back) = read_field(&buf[..]).unwrap();
        assert_eq!(h, header);
        assert_eq!(back, data);
    }

    #[test]
    fn truncated_and_malformed_files() {
        let grid = make_grid(1, 4, 1.0).unwrap();
        let data = vec![Complex::new(1.0, 0.0); 4];
        let mut buf = Vec::new();
        write_field(&mut buf, &FieldHeader { grid, t: 0.0 }, &data).unwrap();
        assert!(read_field(&buf[..buf.len() - 1]).is_err());
        assert!(read_field(&b"nope\n"[..]).is_err());
        assert!(read_field(&b"ddlab-field v1\nn=1 N=3 L=1 t=0\n"[..]).is_err());
    }

    #[test]
    fn norms_csv_layout() {
        let mut buf = Vec::new();
        write_norms_csv(&mut buf, &[NormRow { t: 0.5, l2: 1.0, lq: 2.0, linf: 0.25 }]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,l2,lq,linf\n0.5,1,2,0.25\n");
    }
}
