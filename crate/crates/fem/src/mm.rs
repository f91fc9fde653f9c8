//! Matrix Market coordinate files for complex Hermitian matrices. Values are written in the
//! shortest form that parses back to the same bits.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64 as C64;

use crate::sparse::BlockCsr;
use crate::{FemError, Result};

pub const HEADER: &str = "%%MatrixMarket matrix coordinate complex hermitian";

/// Lower triangle of a Hermitian matrix as read from a file; indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateMatrix {
    pub n: usize,
    pub entries: Vec<(usize, usize, C64)>,
}

pub fn to_string(m: &BlockCsr) -> String {
    let entries = m.lower_entries();
    let mut s = String::with_capacity(48 * entries.len() + 128);
    s.push_str(HEADER);
    s.push('\n');
    let _ = writeln!(s, "{} {} {}", m.dim(), m.dim(), entries.len());
    for (r, c, v) in entries {
        let _ = writeln!(s, "{} {} {:e} {:e}", r + 1, c + 1, v.re, v.im);
    }
    s
}

pub fn write(m: &BlockCsr, mut out: impl Write) -> Result<()> {
    out.write_all(to_string(m).as_bytes())?;
    Ok(())
}

fn bad(line: usize, reason: impl Into<String>) -> FemError {
    FemError::MatrixMarket {
        line,
        reason: reason.into(),
    }
}

/// Parses a complex Hermitian coordinate file. Entries must lie in the lower triangle.
pub fn parse(text: &str) -> Result<CoordinateMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
    let words: Vec<String> = header.split_whitespace().map(|w| w.to_ascii_lowercase()).collect();
    if words != ["%%matrixmarket", "matrix", "coordinate", "complex", "hermitian"] {
        return Err(bad(1, "expected a complex hermitian coordinate header"));
    }
    let mut size = None;
    for (no, line) in lines.by_ref() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad(no + 1, "size line needs rows, columns and entry count"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| bad(no + 1, e.to_string()));
        let (r, c, nnz) = (num(f[0])?, num(f[1])?, num(f[2])?);
        if r != c {
            return Err(bad(no + 1, "hermitian matrix must be square"));
        }
        if nnz > r.saturating_mul(r) {
            return Err(bad(no + 1, "more entries than the matrix can hold"));
        }
        size = Some((no + 1, r, nnz));
        break;
    }
    let (size_line, n, nnz) = size.ok_or_else(|| bad(1, "missing size line"))?;
    let mut entries = Vec::with_capacity(nnz.min(1 << 20));
    for (no, line) in lines {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad(no + 1, "entry needs row, column, real and imaginary part"));
        }
        let idx = |s: &str| -> Result<usize> {
            let v = s.parse::<usize>().map_err(|e| bad(no + 1, e.to_string()))?;
            if v == 0 || v > n {
                return Err(bad(no + 1, format!("index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let val = |s: &str| s.parse::<f64>().map_err(|e| bad(no + 1, e.to_string()));
        let (r, c) = (idx(f[0])?, idx(f[1])?);
        if c > r {
            return Err(bad(no + 1, "entry above the diagonal"));
        }
        let v = C64::new(val(f[2])?, val(f[3])?);
        if r == c && v.im != 0.0 {
            return Err(bad(no + 1, "diagonal of a hermitian matrix must be real"));
        }
        entries.push((r, c, v));
        if entries.len() > nnz {
            return Err(bad(no + 1, "more entries than declared"));
        }
    }
    if entries.len() != nnz {
        return Err(bad(
            size_line,
            format!("declared {nnz} entries, found {}", entries.len()),
        ));
    }
    Ok(CoordinateMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BlockCsr {
        let adj = vec![vec![0, 1], vec![0, 1]];
        let mut m = BlockCsr::from_adjacency(&adj);
        let z = |a: f64, b: f64| C64::new(a, b);
        m.vals[0] = [z(1.0 / 3.0, 0.0), z(0.1, -2e-300), z(0.1, 2e-300), z(7.0, 0.0)];
        m.vals[1] = [z(-1.5, 0.25), z(0.0, 1.0), z(f64::MIN_POSITIVE, 0.0), z(-0.0, 3.0)];
        m.vals[2] = [z(-1.5, -0.25), z(f64::MIN_POSITIVE, -0.0), z(0.0, -1.0), z(-0.0, -3.0)];
        m.vals[3] = [z(std::f64::consts::PI, 0.0), z(1e-17, 5.0), z(1e-17, -5.0), z(2.0, 0.0)];
        m
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let m = sample();
        let text = to_string(&m);
        assert!(text.starts_with(HEADER));
        let back = parse(&text).unwrap();
        assert_eq!(back.n, 4);
        let want = m.lower_entries();
        assert_eq!(back.entries.len(), want.len());
        for (a, b) in back.entries.iter().zip(&want) {
            assert_eq!((a.0, a.1), (b.0, b.1));
            assert_eq!(a.2.re.to_bits(), b.2.re.to_bits());
            assert_eq!(a.2.im.to_bits(), b.2.im.to_bits());
        }
        // writing again gives the same bytes
        assert_eq!(to_string(&m), text);
    }

    #[test]
    fn rejects_malformed_input() {
        for text in [
            "",
            "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n",
            "%%MatrixMarket matrix coordinate complex hermitian\n2 3 1\n",
            "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 2 1 0\n",
            "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 1 0\n",
            "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n3 1 1 0\n",
            "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 1 1 1\n",
            "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 1 x 0\n",
        ] {
            assert!(parse(text).is_err(), "{text:?}");
        }
    }
}
