//! `torushistory v1` velocity history files: one header line, then for each
//! frame its `d` components in `torusfield` row layout.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::FrameSeries;
use crate::field::{parse_header, parse_values, write_values, ScalarField, VelocityField};
use crate::grid::GridSpec;

pub fn history_to_string(frames: &FrameSeries) -> String {
    let g = frames.grid();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "torushistory v1 d={} N={} frames={} dt={:.16e}",
        g.dim(),
        g.n(),
        frames.len(),
        frames.dt()
    );
    for f in frames.frames() {
        for c in f.components() {
            write_values(&mut s, c.values(), g.n());
        }
    }
    s
}

fn header_value<'a>(header: &'a str, key: &str) -> Result<&'a str> {
    header
        .split_whitespace()
        .find_map(|p| p.strip_prefix(key))
        .ok_or_else(|| Error::Parse(format!("history header `{header}` lacks {key}")))
}

pub fn history_from_str(text: &str) -> Result<FrameSeries> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty history file".into()))?;
    let (dim, n) = parse_header(header, "torushistory")?;
    let count: usize = header_value(header, "frames=")?
        .parse()
        .map_err(|_| Error::Parse("bad frames= value".into()))?;
    let dt: f64 = header_value(header, "dt=")?
        .parse()
        .map_err(|_| Error::Parse("bad dt= value".into()))?;
    let grid = GridSpec::new(dim, n)?;
    let values = parse_values(lines.flat_map(str::split_whitespace), count * dim * grid.len())?;
    let frames = values
        .chunks(dim * grid.len())
        .map(|frame| {
            let comps = frame
                .chunks(grid.len())
                .map(|c| ScalarField::new(grid, c.to_vec()))
                .collect::<Result<Vec<_>>>()?;
            VelocityField::new(grid, comps, true)
        })
        .collect::<Result<Vec<_>>>()?;
    FrameSeries::new(grid, dt, frames)
}

pub fn write_history(path: &Path, frames: &FrameSeries) -> Result<()> {
    std::fs::write(path, history_to_string(frames))?;
    Ok(())
}

pub fn read_history(path: &Path) -> Result<FrameSeries> {
    history_from_str(&std::fs::read_to_string(path)?)
}
