//! CSV time series for forward and dual runs. Missing values are empty cells.

use crate::error::{Error, Result};
use crate::evolution::{DualRow, SeriesRow};

pub const FORWARD_HEADER: [&str; 10] = ["step", "t", "linf", "l1", "l2", "mean", "max", "min", "bmo_u", "beta_hat"];
pub const DUAL_HEADER: [&str; 13] = [
    "step",
    "s",
    "linf",
    "l1",
    "l2",
    "mean",
    "a",
    "linf_ratio",
    "l1_value",
    "concentration_ratio",
    "member",
    "center_x",
    "center_y",
];

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

pub fn forward_csv(rows: &[SeriesRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(FORWARD_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.step.to_string(),
            num(r.t),
            num(r.linf),
            num(r.l1),
            num(r.l2),
            num(r.mean),
            num(r.max),
            num(r.min),
            opt(r.bmo_u),
            opt(r.beta_hat),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn dual_csv(rows: &[DualRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DUAL_HEADER).map_err(csv_err)?;
    for r in rows {
        let m = r.membership.as_ref();
        w.write_record([
            r.step.to_string(),
            num(r.s),
            num(r.linf),
            num(r.l1),
            num(r.l2),
            num(r.mean),
            opt(m.and_then(|m| m.minimal_scale)),
            opt(m.map(|m| m.linf_ratio)),
            opt(m.map(|m| m.l1_value)),
            opt(m.map(|m| m.concentration_ratio())),
            m.map(|m| m.member.to_string()).unwrap_or_default(),
            opt(m.map(|m| m.best_center[0])),
            opt(m.map(|m| m.best_center[1])),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}
