//! Plain-text matrix and edge-list formats.
//!
//! Matrix: a line `n`, then `n` rows of `n` whitespace-separated reals.
//! Edge list: a line `n`, then one `i j` per line (1-based, `i == j` is a
//! self-loop). Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphlimit::LoopGraph;
use crate::matcore::{DenseMatrix, SymMatrix, SYMMETRY_REL_TOL};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize)> {
    let (line, text) = lines.next().ok_or_else(|| parse_err(1, "missing dimension line"))?;
    let n = text
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected dimension, got {text:?}")))?;
    if n == 0 {
        return Err(parse_err(line, "dimension must be positive"));
    }
    Ok((line, n))
}

/// Unsymmetrized parse, for callers that want to inspect asymmetric input.
pub fn parse_dense(text: &str) -> Result<DenseMatrix> {
    let mut lines = content_lines(text);
    let (header, n) = parse_header(&mut lines)?;
    let mut m = DenseMatrix::zeros(n, n);
    let mut last = header;
    for i in 0..n {
        let (line, row) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {n} rows, found {i}")))?;
        last = line;
        let vals = row
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("not a finite real: {t:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != n {
            return Err(parse_err(line, format!("expected {n} entries, found {}", vals.len())));
        }
        for (j, v) in vals.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, format!("unexpected content after {n} rows")));
    }
    Ok(m)
}

/// Parses and validates symmetry at relative tolerance `1e-9`.
pub fn parse_matrix(text: &str) -> Result<SymMatrix> {
    SymMatrix::from_dense(parse_dense(text)?, SYMMETRY_REL_TOL)
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_edges(text: &str) -> Result<LoopGraph> {
    let mut lines = content_lines(text);
    let (_, n) = parse_header(&mut lines)?;
    let mut edges = Vec::new();
    for (line, row) in lines {
        let parts: Vec<&str> = row.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(line, format!("expected \"i j\", got {row:?}")));
        }
        let mut ends = [0usize; 2];
        for (slot, t) in ends.iter_mut().zip(&parts) {
            let v = t
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("not a vertex index: {t:?}")))?;
            if v == 0 || v > n {
                return Err(parse_err(line, format!("vertex {v} outside 1..{n}")));
            }
            *slot = v;
        }
        edges.push((ends[0], ends[1]));
    }
    LoopGraph::from_one_based(n, edges)
}

pub fn format_edges(g: &LoopGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<SymMatrix> {
    parse_matrix(&read(path.as_ref())?)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<LoopGraph> {
    parse_edges(&read(path.as_ref())?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_is_bitwise() {
        let m = SymMatrix::from_fn(4, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + 0.1f64.powi(i as i32));
        let back = parse_matrix(&format_matrix(m.as_dense())).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        let m = SymMatrix::from_fn(3, |i, j| (i * 3 + j) as f64 / 7.0);
        write_matrix(&path, m.as_dense()).unwrap();
        assert_eq!(load_matrix(&path).unwrap(), m);
        assert!(matches!(load_matrix(dir.path().join("none")), Err(Error::Io { .. })));
    }

    #[test]
    fn cycle_edges() {
        let g = parse_edges("4\n1 2\n2 3\n3 4\n1 4\n").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(parse_edges(&format_edges(&g)).unwrap(), g);
        let g = parse_edges("3\n# loop\n2 2\n").unwrap();
        assert!(g.has_self_loop(1));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let text = "3\n2 1 0\n0 2 1\n1 0 2\n";
        assert!(matches!(parse_matrix(text), Err(Error::Asymmetric { .. })));
        assert!(parse_dense(text).is_ok());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("x\n", 1),
            ("2\n1 0\n0\n", 3),
            ("2\n1 0\n", 3),
            ("2\n1 0\n0 1\n5 5\n", 4),
            ("2\n1 nan\n0 1\n", 2),
        ];
        for (text, want) in cases {
            match parse_matrix(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        match parse_edges("3\n1 2\n1 4\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
