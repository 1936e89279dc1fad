//! Maximum principle, mean conservation and energy decay along forward runs.

use crate::error::Result;
use crate::evolution::{run_forward, ForwardOptions, SeriesRow, SimConfig};
use crate::field::ScalarField;

use super::report::{Relation, VerificationReport};

/// Allowed growth of `max θ`, `-min θ` and `‖θ‖₂` per unit time.
pub const DRIFT_PER_TIME: f64 = 1e-8;
/// Allowed change of the mean.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Largest growth rate between consecutive rows.
fn worst_rate(rows: &[SeriesRow], value: impl Fn(&SeriesRow) -> f64) -> f64 {
    rows.windows(2)
        .map(|w| (value(&w[1]) - value(&w[0])) / (w[1].t - w[0].t))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Records the three invariant verdicts for a completed series.
pub fn check_invariants(report: &mut VerificationReport, rows: &[SeriesRow]) {
    report.series("t", rows.iter().map(|r| r.t).collect());
    report.series("max", rows.iter().map(|r| r.max).collect());
    report.series("min", rows.iter().map(|r| r.min).collect());
    report.series("l2", rows.iter().map(|r| r.l2).collect());
    report.series("mean", rows.iter().map(|r| r.mean).collect());
    if rows.len() < 2 {
        for name in ["max_nonincreasing", "min_nondecreasing", "energy_nonincreasing"] {
            report.not_applicable(name, "fewer than two rows");
        }
    } else {
        let detail = "largest growth rate per unit time between rows";
        report.check("max_nonincreasing", worst_rate(rows, |r| r.max), Relation::Le, DRIFT_PER_TIME, detail);
        report.check("min_nondecreasing", worst_rate(rows, |r| -r.min), Relation::Le, DRIFT_PER_TIME, detail);
        report.check("energy_nonincreasing", worst_rate(rows, |r| r.l2), Relation::Le, DRIFT_PER_TIME, detail);
    }
    let m0 = rows[0].mean;
    let drift = rows.iter().map(|r| (r.mean - m0).abs()).fold(0.0, f64::max);
    report.check("mean_conserved", drift, Relation::Le, MEAN_TOLERANCE, "max |mean(t) - mean(0)|");
}

/// Forward run with a row at every step.
pub fn verify_invariants(cfg: &SimConfig, theta0: &ScalarField) -> Result<VerificationReport> {
    let mut cfg = cfg.clone();
    cfg.cadence = 1;
    let mut report = VerificationReport::new("invariants", cfg.describe());
    let run = run_forward(&cfg, theta0, &ForwardOptions::default())?;
    report.constant("dt", run.dt);
    check_invariants(&mut report, &run.rows);
    Ok(report)
}
