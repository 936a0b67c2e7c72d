//! `pointset v1` text format.
//!
//! ```text
//! pointset v1 d=<d> n=<n>
//! # generator=lattice
//! # nominal_dimension=2
//! 0.0000000000000000e0 5.0000000000000000e-1
//! ...
//! ```
//!
//! Coordinates are written with 17 significant digits, which round-trips
//! every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{PointGenError, PointMeta, PointSet};

pub const FORMAT_HEADER: &str = "pointset v1";

pub fn write_pointset(set: &PointSet) -> String {
    let mut out = String::with_capacity(set.coords().len() * 24 + 128);
    let _ = writeln!(out, "{FORMAT_HEADER} d={} n={}", set.dim(), set.len());
    let meta = set.meta();
    if !meta.generator.is_empty() {
        let _ = writeln!(out, "# generator={}", meta.generator);
    }
    if let Some(seed) = meta.seed {
        let _ = writeln!(out, "# seed={seed}");
    }
    if let Some(s) = meta.nominal_dimension {
        let _ = writeln!(out, "# nominal_dimension={s:?}");
    }
    if let Some(sep) = meta.separation {
        let _ = writeln!(out, "# separation={sep:?}");
    }
    for (k, v) in &meta.extra {
        let _ = writeln!(out, "# {k}={v}");
    }
    for p in set.points() {
        for (i, x) in p.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn read_pointset(path: impl AsRef<Path>) -> Result<PointSet, PointGenError> {
    parse_pointset(&fs::read_to_string(path)?)
}

pub fn parse_pointset(text: &str) -> Result<PointSet, PointGenError> {
    let err = |line: usize, msg: String| PointGenError::Parse { line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let rest = header
        .strip_prefix(FORMAT_HEADER)
        .ok_or_else(|| err(1, format!("expected `{FORMAT_HEADER} d=<d> n=<n>`")))?;
    let mut d = None;
    let mut n = None;
    for tok in rest.split_whitespace() {
        match tok.split_once('=') {
            Some(("d", v)) => d = v.parse::<usize>().ok(),
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            _ => return Err(err(1, format!("unexpected header token `{tok}`"))),
        }
    }
    let d = d.filter(|&d| d > 0).ok_or_else(|| err(1, "missing or invalid d".into()))?;
    let n = n.ok_or_else(|| err(1, "missing or invalid n".into()))?;

    let mut meta = PointMeta::default();
    let mut coords = Vec::with_capacity(n * d);
    let mut rows = 0usize;
    for (lineno, line) in lines {
        if rows == 0 {
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    apply_meta(&mut meta, k.trim(), v.trim())
                        .map_err(|msg| err(lineno, msg))?;
                }
                continue;
            }
        }
        if line.trim().is_empty() {
            continue;
        }
        let before = coords.len();
        for tok in line.split(' ') {
            let x = tok
                .parse::<f64>()
                .map_err(|_| err(lineno, format!("invalid coordinate `{tok}`")))?;
            coords.push(x);
        }
        let got = coords.len() - before;
        if got != d {
            return Err(err(lineno, format!("expected {d} coordinates, found {got}")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(err(0, format!("header declares n={n} but {rows} points follow")));
    }
    PointSet::new(d, coords, meta)
}

fn apply_meta(meta: &mut PointMeta, key: &str, value: &str) -> Result<(), String> {
    let float = |v: &str| v.parse::<f64>().map_err(|_| format!("invalid {key} `{v}`"));
    match key {
        "generator" => meta.generator = value.to_string(),
        "seed" => meta.seed = Some(value.parse().map_err(|_| format!("invalid seed `{value}`"))?),
        "nominal_dimension" => meta.nominal_dimension = Some(float(value)?),
        "separation" => meta.separation = Some(float(value)?),
        _ => {
            meta.extra.insert(key.to_string(), value.to_string());
        }
    }
    Ok(())
}
