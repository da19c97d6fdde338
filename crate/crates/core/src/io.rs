//! Text file formats and output helpers.
//!
//! - Signal: one decimal float per line.
//! - Edge list: header `N M`, then `M` lines `i j w` (0-based).
//! - Point cloud: header `N D`, then `N` rows of `D` floats.
//!
//! All floats are written with [`format_g`] (C `%.12g`).

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Formats like C's `%.12g`. Negative zero prints as `0`.
pub fn format_g(x: f64) -> String {
    const PREC: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (PREC - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PREC - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{tok}'"),
    })
}

pub fn parse_signal(text: &str) -> Result<Vec<f64>> {
    data_lines(text)
        .map(|(line, l)| {
            let v: f64 = parse_field(line, Some(l), "value")?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: "non-finite value".into(),
                });
            }
            Ok(v)
        })
        .collect()
}

pub fn write_signal<W: Write>(mut out: W, f: &[f64]) -> io::Result<()> {
    for v in f {
        writeln!(out, "{}", format_g(*v))?;
    }
    Ok(())
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing 'N M' header".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_field(hl, toks.next(), "vertex count")?;
    let m: usize = parse_field(hl, toks.next(), "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let i: usize = parse_field(line, toks.next(), "source vertex")?;
        let j: usize = parse_field(line, toks.next(), "target vertex")?;
        let w: f64 = parse_field(line, toks.next(), "weight")?;
        edges.push((i, j, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hl,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list<W: Write>(mut out: W, g: &Graph) -> io::Result<()> {
    writeln!(out, "{} {}", g.num_vertices(), g.num_edges())?;
    for (i, j, w) in g.edges() {
        writeln!(out, "{i} {j} {}", format_g(w))?;
    }
    Ok(())
}

pub fn parse_point_cloud(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing 'N D' header".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_field(hl, toks.next(), "point count")?;
    let d: usize = parse_field(hl, toks.next(), "dimension")?;
    let mut points = Vec::with_capacity(n);
    for (line, l) in lines {
        let row: Vec<f64> = l
            .split_whitespace()
            .map(|t| parse_field(line, Some(t), "coordinate"))
            .collect::<Result<_>>()?;
        if row.len() != d {
            return Err(Error::Parse {
                line,
                message: format!("expected {d} coordinates, found {}", row.len()),
            });
        }
        points.push(row);
    }
    if points.len() != n {
        return Err(Error::Parse {
            line: hl,
            message: format!("header declares {n} points, found {}", points.len()),
        });
    }
    Ok(points)
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => Path::new(".").to_path_buf(),
    };
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}
